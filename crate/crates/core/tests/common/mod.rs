#![allow(dead_code)]

use fastqz::qs_core::Polynomial;
use fastqz::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_square(r: &mut ChaCha8Rng) -> C64 {
    C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

pub fn random_poly(r: &mut ChaCha8Rng, degree: usize) -> Polynomial {
    Polynomial::new((0..=degree).map(|_| unit_square(r)).collect()).unwrap()
}
