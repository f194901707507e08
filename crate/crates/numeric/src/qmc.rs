//! Owen-scrambled Sobol points.
//!
//! Direction numbers for the first eight dimensions follow Joe and Kuo
//! (new-joe-kuo-6.21201). Scrambling is the hash-based nested uniform
//! permutation of Laine and Karras applied in bit-reversed order, seeded per
//! dimension. Every point is a pure function of `(index, dim, seed)`, so
//! parallel evaluation is reproducible.

/// `(s, a, m_1..m_s)` for dimensions 2..=8; dimension 1 is the van der
/// Corput sequence.
const JOE_KUO: [(u32, u32, &[u32]); 7] = [
    (1, 0, &[1]),
    (2, 1, &[1, 3]),
    (3, 1, &[1, 3, 1]),
    (3, 2, &[1, 1, 1]),
    (4, 1, &[1, 1, 3, 3]),
    (4, 4, &[1, 3, 5, 13]),
    (5, 2, &[1, 1, 5, 5, 17]),
];

pub const MAX_DIM: usize = 8;

#[derive(Debug, Clone)]
pub struct Sobol {
    /// `v[d][k]`: direction number for bit `k` of the index, left-aligned.
    v: Vec<[u32; 32]>,
}

impl Sobol {
    pub fn new(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "Sobol table has {MAX_DIM} dimensions");
        let mut v = Vec::with_capacity(dim);
        for d in 0..dim {
            let mut dir = [0u32; 32];
            if d == 0 {
                for (k, x) in dir.iter_mut().enumerate() {
                    *x = 1 << (31 - k);
                }
            } else {
                let (s, a, m) = JOE_KUO[d - 1];
                let s = s as usize;
                for k in 0..s.min(32) {
                    dir[k] = m[k] << (31 - k);
                }
                for k in s..32 {
                    let mut x = dir[k - s] ^ (dir[k - s] >> s);
                    for j in 1..s {
                        if (a >> (s - 1 - j)) & 1 == 1 {
                            x ^= dir[k - j];
                        }
                    }
                    dir[k] = x;
                }
            }
            v.push(dir);
        }
        Sobol { v }
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// Unscrambled coordinate as a 32-bit fraction.
    pub fn raw(&self, index: u32, d: usize) -> u32 {
        let mut x = 0;
        let mut i = index;
        let mut k = 0;
        while i != 0 {
            if i & 1 == 1 {
                x ^= self.v[d][k];
            }
            i >>= 1;
            k += 1;
        }
        x
    }

    /// Scrambled point in the open unit cube (cell midpoints, never 0 or 1).
    pub fn point(&self, index: u32, seed: u64, out: &mut [f64]) {
        for (d, o) in out.iter_mut().enumerate().take(self.dim()) {
            let x = owen_scramble(self.raw(index, d), dim_seed(seed, d));
            *o = (x as f64 + 0.5) / 4_294_967_296.0;
        }
    }
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn dim_seed(seed: u64, d: usize) -> u32 {
    (mix64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (d as u64 + 1)) >> 32) as u32
}

/// Laine-Karras style hash: each bit is flipped by a function of the bits
/// below it, which is a nested uniform scramble of the reversed integer.
fn lk_permute(mut x: u32, seed: u32) -> u32 {
    x = x.wrapping_add(seed);
    x ^= x.wrapping_mul(0x6c50_b47c);
    x ^= x.wrapping_mul(0xb82f_1e52);
    x ^= x.wrapping_mul(0xc7af_e638);
    x ^= x.wrapping_mul(0x8d22_f6e6);
    x
}

pub fn owen_scramble(x: u32, seed: u32) -> u32 {
    lk_permute(x.reverse_bits(), seed).reverse_bits()
}
