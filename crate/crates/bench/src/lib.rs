//! Seeded fixtures shared by the benchmark kernels.

use jcok::module_types::TupleSpec;
use jcok::padic::{MatPk, Modulus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_matrix(p: u64, k: u32, n: usize, seed: u64) -> MatPk {
    let modulus = Modulus::new(p, k).expect("valid modulus");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..n * n).map(|_| rng.random_range(0..modulus.order())).collect();
    MatPk::from_residues(modulus, n, n, data).expect("n×n data")
}

pub fn four_shift_tuple() -> TupleSpec {
    "p=7\nx=0,1,2,3\nH1=1,2,3\nH2=1,2,2\nH3=1,3,inf\nH4=2,2,2\n".parse().expect("valid tuple")
}
