pub mod bounds;
pub mod dot;
pub mod error;
pub mod partitions;
pub mod symgroup;
pub mod value;
pub mod zigzag;
pub mod realtrop;
pub mod tropical;
