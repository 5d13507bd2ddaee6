#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use supdate_core::{Field, FieldMatrix};

/// (p, m) for every field of order at most 512.
pub const SMALL_FIELDS: &[(u32, u32)] = &[
    (2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1), (2, 4), (17, 1),
    (19, 1), (23, 1), (5, 2), (3, 3), (29, 1), (31, 1), (2, 5), (37, 1), (7, 2), (2, 6), (3, 4),
    (11, 2), (2, 7), (5, 3), (13, 2), (17, 2), (2, 8), (251, 1), (3, 5), (19, 2), (7, 3),
    (2, 9),
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn field(p: u32, m: u32) -> Field {
    Field::new(p, m, None).unwrap()
}

pub fn random_matrix(f: &Field, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> FieldMatrix {
    let data = (0..rows * cols).map(|_| rng.gen_range(0..f.order())).collect();
    FieldMatrix::new(f, rows, cols, data).unwrap()
}

/// Redraws until the matrix has full row rank. Needs rows <= cols.
pub fn random_full_rank(f: &Field, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> FieldMatrix {
    loop {
        let m = random_matrix(f, rows, cols, rng);
        if m.rank() == rows {
            return m;
        }
    }
}

/// Every vector of length n over GF(q) with weight at most w, lightest first.
pub fn all_sparse(n: usize, q: u32, w: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0; n]];
    for weight in 1..=w.min(n) {
        let mut support: Vec<usize> = (0..weight).collect();
        loop {
            let mut values = vec![1u32; weight];
            loop {
                let mut v = vec![0; n];
                for (&i, &x) in support.iter().zip(&values) {
                    v[i] = x;
                }
                out.push(v);
                let mut j = 0;
                while j < weight {
                    values[j] += 1;
                    if values[j] < q {
                        break;
                    }
                    values[j] = 1;
                    j += 1;
                }
                if j == weight {
                    break;
                }
            }
            // next support
            let mut i = weight;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if support[i] < n - weight + i {
                    break;
                }
            }
            if support[i] >= n - weight + i {
                break;
            }
            support[i] += 1;
            for j in i + 1..weight {
                support[j] = support[j - 1] + 1;
            }
        }
    }
    out
}

pub fn weight(v: &[u32]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

/// Every codeword of the row space, by enumerating all messages.
pub fn all_codewords(g: &FieldMatrix) -> Vec<Vec<u32>> {
    let q = g.field().order() as usize;
    let k = g.rows();
    let total = q.pow(k as u32);
    (0..total)
        .map(|mut idx| {
            let msg: Vec<u32> = (0..k)
                .map(|_| {
                    let d = (idx % q) as u32;
                    idx /= q;
                    d
                })
                .collect();
            g.left_mul_vec(&msg).unwrap()
        })
        .collect()
}
