use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{det, Scalar, Vector};
use crate::bodies::{Generator, SmoothBody, SymmetricPolytope, Zonotope};

/// Independent stream for trial `index` under `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn random_int_vector(rng: &mut impl Rng, n: usize, bound: i64) -> Vector {
    loop {
        let v: Vec<i64> = (0..n).map(|_| rng.random_range(-bound..=bound)).collect();
        if v.iter().any(|&x| x != 0) {
            return Vector::from_ints(&v);
        }
    }
}

/// `p/q` with `1 ≤ p ≤ 4`, `1 ≤ q ≤ 3`.
pub fn random_weight(rng: &mut impl Rng) -> Scalar {
    Scalar::ratio(rng.random_range(1..=4), rng.random_range(1..=3))
}

/// `t ∈ (0, 1)` with denominator at most 6.
pub fn random_t(rng: &mut impl Rng) -> Scalar {
    let q = rng.random_range(2..=6);
    Scalar::ratio(rng.random_range(1..q), q)
}

/// Full-dimensional zonotope with `n ≤ m ≤ max_gens` integer generators of
/// absolute coordinates at most `bound`. With `unit_weights` every
/// `λ = 1`; otherwise weights are small rationals.
pub fn random_zonotope(rng: &mut impl Rng, n: usize, max_gens: usize, bound: i64, unit_weights: bool) -> Zonotope {
    let max_gens = max_gens.max(n);
    loop {
        let m = rng.random_range(n..=max_gens);
        let gens: Vec<Generator> = (0..m)
            .map(|_| {
                let u = random_int_vector(rng, n, bound);
                let lambda = if unit_weights { Scalar::one() } else { random_weight(rng) };
                Generator::new(u, lambda)
            })
            .collect();
        let z = Zonotope::new(n, gens).expect("valid generators");
        if z.is_full_dimensional() {
            return z;
        }
    }
}

/// Full-dimensional symmetric polytope `conv{±v_1, …, ±v_k}` with
/// `n ≤ k ≤ max_pairs`.
pub fn random_polytope(rng: &mut impl Rng, n: usize, max_pairs: usize, bound: i64) -> SymmetricPolytope {
    let max_pairs = max_pairs.max(n);
    loop {
        let k = rng.random_range(n..=max_pairs);
        let pts = (0..k).map(|_| random_int_vector(rng, n, bound)).collect();
        let p = SymmetricPolytope::new(n, pts).expect("valid points");
        if p.is_full_dimensional() {
            return p;
        }
    }
}

/// Sum of `count` random ellipsoids `BBᵀ + I/10`.
pub fn random_smooth(rng: &mut impl Rng, n: usize, count: usize) -> SmoothBody {
    let mats: Vec<DMatrix<f64>> = (0..count.max(1))
        .map(|_| {
            let b = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
            &b * b.transpose() + DMatrix::identity(n, n) * 0.1
        })
        .collect();
    SmoothBody::from_f64_matrices(n, &mats).expect("positive definite")
}

/// Invertible integer matrix with entries in `[-2, 2]`, rows returned.
pub fn random_invertible(rng: &mut impl Rng, n: usize) -> Vec<Vector> {
    loop {
        let rows: Vec<Vector> = (0..n)
            .map(|_| Vector::from_ints(&(0..n).map(|_| rng.random_range(-2..=2)).collect::<Vec<_>>()))
            .collect();
        if !det(&rows).is_zero() {
            return rows;
        }
    }
}

fn apply(rows: &[Vector], v: &Vector) -> Vector {
    Vector::new(rows.iter().map(|r| r.dot(v)).collect())
}

/// Random split of `n` into positive block sizes.
pub fn random_composition(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut left = n;
    while left > 0 {
        let d = rng.random_range(1..=left);
        out.push(d);
        left -= d;
    }
    out
}

/// An equality instance `(K, L)`: `K = T(C_1 ⊕ … ⊕ C_m)` for random blocks
/// `C_i` and an invertible integer map `T`, and `L = T(Σ a_i C_i)`.
pub fn random_direct_sum(rng: &mut impl Rng, n: usize, max_gens_per_block: usize, bound: i64) -> (Zonotope, Zonotope) {
    let dims = random_composition(rng, n);
    let t = random_invertible(rng, n);
    let mut k_gens = Vec::new();
    let mut l_gens = Vec::new();
    let mut offset = 0;
    for &d in &dims {
        let block = random_zonotope(rng, d, max_gens_per_block.max(d), bound, false);
        let a = random_weight(rng);
        for g in block.generators() {
            let mut coords = vec![Scalar::zero(); n];
            for (i, c) in g.u.iter().enumerate() {
                coords[offset + i] = c.clone();
            }
            let u = apply(&t, &Vector::new(coords));
            k_gens.push(Generator::new(u.clone(), g.lambda.clone()));
            l_gens.push(Generator::new(u, &g.lambda * &a));
        }
        offset += d;
    }
    (
        Zonotope::new(n, k_gens).expect("valid generators"),
        Zonotope::new(n, l_gens).expect("valid generators"),
    )
}
