//! Matrix Market write-then-read must be the identity on canonical CSR.

use num_complex::Complex64;
use rand::distributions::{Distribution, Uniform};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zkrylov::csr::CsrMatrix;
use zkrylov::mm::{read_matrix_market, write_matrix_market};

fn random_csr(rng: &mut ChaCha8Rng, n: usize, density: f64) -> CsrMatrix {
    let dist = Uniform::new_inclusive(-1.0e3f64, 1.0e3);
    let mut triplets = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if rng.gen::<f64>() < density {
                triplets.push((i, j, Complex64::new(dist.sample(rng), dist.sample(rng))));
            }
        }
    }
    CsrMatrix::from_triplets(n, n, &triplets).unwrap()
}

#[test]
fn randomized_round_trips_are_bit_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let dir = tempfile::tempdir().unwrap();
    for trial in 0..100 {
        let n = 1 + (trial % 17) * 6;
        let m = random_csr(&mut rng, n, 0.2);
        let path = dir.path().join(format!("m{trial}.mtx"));
        write_matrix_market(&m, &path).unwrap();
        let back = read_matrix_market(&path).unwrap();
        assert_eq!(m.row_ptr(), back.row_ptr(), "trial {trial}");
        assert_eq!(m.col_idx(), back.col_idx(), "trial {trial}");
        // Bit-exact value comparison.
        for (a, b) in m.values().iter().zip(back.values()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits(), "trial {trial}");
            assert_eq!(a.im.to_bits(), b.im.to_bits(), "trial {trial}");
        }
    }
}

#[test]
fn round_trip_random_100x100() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let m = random_csr(&mut rng, 100, 0.1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.mtx");
    write_matrix_market(&m, &path).unwrap();
    assert_eq!(m, read_matrix_market(&path).unwrap());
}
