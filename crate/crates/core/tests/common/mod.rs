//! Brute-force factorization counts over plain vectors, sharing no code
//! with the library.

#![allow(dead_code)]

pub type Perm = Vec<usize>;

pub fn all_perms(d: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur: Perm = (0..d).collect();
    fn heap(k: usize, a: &mut Perm, out: &mut Vec<Perm>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, a, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            a.swap(j, k - 1);
        }
    }
    heap(d, &mut cur, &mut out);
    out
}

/// `(a ∘ b)(i) = a(b(i))`.
pub fn compose(a: &Perm, b: &Perm) -> Perm {
    b.iter().map(|&i| a[i]).collect()
}

pub fn inverse(a: &Perm) -> Perm {
    let mut v = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        v[x] = i;
    }
    v
}

pub fn cycle_type(a: &Perm) -> Vec<u32> {
    let mut seen = vec![false; a.len()];
    let mut t = Vec::new();
    for i in 0..a.len() {
        let mut n = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = a[j];
            n += 1;
        }
        if n > 0 {
            t.push(n);
        }
    }
    t.sort_unstable_by(|x, y| y.cmp(x));
    t
}

fn transitive(d: usize, gens: &[&Perm]) -> bool {
    let mut seen = vec![false; d];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for g in gens {
            let j = g[i];
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.iter().all(|&b| b)
}

fn transpositions(d: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            let mut p: Perm = (0..d).collect();
            p.swap(a, b);
            out.push(p);
        }
    }
    out
}

/// Number of `(σ₁, τ₁, …, τ_r)` with `σ₁` of type λ, `τᵢ` transpositions,
/// `(τ_r ⋯ τ₁ σ₁)⁻¹` of type μ, generating a transitive group.
pub fn complex_count(lambda: &[u32], mu: &[u32], r: usize) -> u64 {
    let d = lambda.iter().sum::<u32>() as usize;
    let ts = transpositions(d);
    fn rec(d: usize, ts: &[Perm], s1: &Perm, cur: &Perm, used: &mut Vec<usize>, r: usize, mu: &[u32]) -> u64 {
        if used.len() == r {
            if cycle_type(cur) != mu {
                return 0;
            }
            let mut gens: Vec<&Perm> = used.iter().map(|&i| &ts[i]).collect();
            gens.push(s1);
            return u64::from(transitive(d, &gens));
        }
        let mut n = 0;
        for i in 0..ts.len() {
            used.push(i);
            n += rec(d, ts, s1, &compose(&ts[i], cur), used, r, mu);
            used.pop();
        }
        n
    }
    all_perms(d)
        .into_iter()
        .filter(|p| cycle_type(p) == lambda)
        .map(|s1| rec(d, &ts, &s1, &s1, &mut Vec::new(), r, mu))
        .sum()
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}
