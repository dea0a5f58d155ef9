#![allow(dead_code)]

use chowforge_core::linalg;
use chowforge_core::rational::q;
use chowforge_core::Matroid;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Loopless matroid of a random `{-1, 0, 1}` matrix with `r` rows and `n`
/// columns of full row rank, handed over as its list of bases.
pub fn random_bases_matroid(rng: &mut impl Rng, r: usize, n: usize) -> Matroid {
    loop {
        let cols: Vec<Vec<i64>> = (0..n)
            .map(|_| loop {
                let c: Vec<i64> = (0..r).map(|_| rng.gen_range(-1..=1)).collect();
                if c.iter().any(|&v| v != 0) {
                    break c;
                }
            })
            .collect();
        let mut bases = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != r {
                continue;
            }
            let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let rows: Vec<Vec<_>> = members.iter().map(|&i| cols[i].iter().map(|&v| q(v)).collect()).collect();
            if linalg::rank(&rows) == r {
                bases.push(members.iter().map(|i| i + 1).collect::<Vec<usize>>());
            }
        }
        if !bases.is_empty() {
            return Matroid::from_bases(n, &bases).expect("bases of a vector configuration");
        }
    }
}

/// Twenty random bases-defined loopless matroids on at most six elements.
pub fn random_matroids(seed: u64, count: usize) -> Vec<(String, Matroid)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(3..=6);
            let r = rng.gen_range(2..n);
            let m = random_bases_matroid(&mut rng, r, n);
            (format!("R{i}(r={r},n={n})"), m)
        })
        .collect()
}

pub fn uniform_family(max_n: usize) -> Vec<(String, Matroid)> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for r in 1..=n {
            out.push((format!("U{r},{n}"), Matroid::uniform(r, n).unwrap()));
        }
    }
    out
}

pub fn boolean_family(max_n: usize) -> Vec<(String, Matroid)> {
    (1..=max_n).map(|n| (format!("B{n}"), Matroid::boolean(n).unwrap())).collect()
}
