//! Linear codes, cores, locality and the MRSC verifier.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::{binomial, Combinations, FieldMatrix, SupportSet};

/// An [n, k] code given by a full-row-rank k x n generator. k = 0 is the
/// zero code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    generator: FieldMatrix,
}

impl LinearCode {
    pub fn new(generator: FieldMatrix) -> Result<LinearCode> {
        let rank = generator.rank();
        if rank != generator.rows() {
            return Err(Error::NotFullRank {
                rank,
                rows: generator.rows(),
            });
        }
        Ok(LinearCode { generator })
    }

    /// The code spanned by the rows of `m`, whatever its rank.
    pub fn span(m: &FieldMatrix) -> LinearCode {
        LinearCode {
            generator: m.row_basis(),
        }
    }

    pub fn zero(field: &Field, n: usize) -> LinearCode {
        LinearCode {
            generator: FieldMatrix::empty(field, n),
        }
    }

    pub fn field(&self) -> &Field {
        self.generator.field()
    }

    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    pub fn dim(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &FieldMatrix {
        &self.generator
    }

    pub fn dual(&self) -> LinearCode {
        LinearCode {
            generator: self.generator.kernel_basis(),
        }
    }

    /// Generator of the dual code.
    pub fn parity_matrix(&self) -> FieldMatrix {
        self.generator.kernel_basis()
    }

    /// `C|_S`: all codewords restricted to the coordinates in S.
    pub fn puncture(&self, s: &SupportSet) -> Result<LinearCode> {
        self.check_support(s)?;
        Ok(LinearCode::span(&self.generator.restrict_columns(s)?))
    }

    /// `C^S`: codewords vanishing outside S, restricted to S.
    pub fn shorten(&self, s: &SupportSet) -> Result<LinearCode> {
        self.check_support(s)?;
        let outside = self.generator.restrict_columns(&s.complement())?;
        let coeffs = outside.left_kernel_basis();
        if coeffs.rows() == 0 {
            return Ok(LinearCode::zero(self.field(), s.len()));
        }
        let words = coeffs.mul(&self.generator)?;
        Ok(LinearCode::span(&words.restrict_columns(s)?))
    }

    fn check_support(&self, s: &SupportSet) -> Result<()> {
        if s.n() != self.n() {
            return Err(Error::Dimension(format!(
                "support over {} coordinates for a code of length {}",
                s.n(),
                self.n()
            )));
        }
        Ok(())
    }

    fn check_compatible(&self, other: &LinearCode) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        if self.n() != other.n() {
            return Err(Error::Dimension(format!(
                "codes of length {} and {}",
                self.n(),
                other.n()
            )));
        }
        Ok(())
    }

    pub fn contains(&self, other: &LinearCode) -> Result<bool> {
        self.check_compatible(other)?;
        self.generator.contains_rows_of(&other.generator)
    }

    pub fn contains_word(&self, word: &[u32]) -> Result<bool> {
        let w = FieldMatrix::new(self.field(), 1, word.len(), word.to_vec())?;
        self.generator.contains_rows_of(&w)
    }

    pub fn same_code(&self, other: &LinearCode) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.dim() == other.dim() && self.contains(other)?)
    }

    /// X with `self.generator = X * sup.generator`.
    pub fn subcode_factor(&self, sup: &LinearCode) -> Result<FieldMatrix> {
        self.check_compatible(sup)?;
        if self.dim() == 0 {
            return Ok(FieldMatrix::zeros(self.field(), 0, sup.dim()));
        }
        sup.generator
            .solve_left(&self.generator)?
            .ok_or(Error::NotSubcode)
    }

    pub fn intersection(&self, other: &LinearCode) -> Result<LinearCode> {
        self.check_compatible(other)?;
        Ok(LinearCode {
            generator: self.generator.row_space_intersection(&other.generator)?,
        })
    }

    pub fn sum(&self, other: &LinearCode) -> Result<LinearCode> {
        self.check_compatible(other)?;
        Ok(LinearCode::span(&self.generator.vstack(&other.generator)?))
    }

    /// S is an |S|-core of the dual code iff G restricted to S has full
    /// column rank, i.e. no dual codeword is supported inside S.
    pub fn is_core_of_dual(&self, s: &SupportSet) -> bool {
        s.len() <= self.dim() && self.generator.rank_of_columns(s.indices()) == s.len()
    }

    /// All size-k cores of the dual code, in lexicographic order.
    pub fn enumerate_k_cores(&self, k: usize) -> Vec<SupportSet> {
        let n = self.n();
        if k > self.dim() || k > n {
            return Vec::new();
        }
        let g = &self.generator;
        let sets: Vec<Vec<usize>> = if k == 0 {
            vec![Vec::new()]
        } else {
            (0..=n - k)
                .into_par_iter()
                .flat_map_iter(|first| {
                    let mut out = Vec::new();
                    let mut rest = Combinations::new(n - first - 1, k - 1);
                    let mut buf = vec![first; k];
                    while let Some(r) = rest.next_subset() {
                        for (j, &x) in r.iter().enumerate() {
                            buf[j + 1] = first + 1 + x;
                        }
                        if g.rank_of_columns(&buf) == k {
                            out.push(buf.clone());
                        }
                    }
                    out
                })
                .collect()
        };
        sets.into_iter()
            .map(|idx| SupportSet::new(n, idx).expect("sorted by construction"))
            .collect()
    }
}

/// First size-k subset of {0..n}, in lexicographic order, on which
/// `violates` holds. Scans in parallel over the smallest element.
pub(crate) fn first_violation<F>(n: usize, k: usize, violates: F) -> Option<Vec<usize>>
where
    F: Fn(&[usize]) -> bool + Sync,
{
    if k > n {
        return None;
    }
    if k == 0 {
        return violates(&[]).then(Vec::new);
    }
    (0..=n - k).into_par_iter().find_map_first(|first| {
        let mut rest = Combinations::new(n - first - 1, k - 1);
        let mut buf = vec![first; k];
        while let Some(r) = rest.next_subset() {
            for (j, &x) in r.iter().enumerate() {
                buf[j + 1] = first + 1 + x;
            }
            if violates(&buf) {
                return Some(buf);
            }
        }
        None
    })
}

/// Position of `subset` in the lexicographic order of size-k subsets of
/// {0..n}, counting from 0.
pub(crate) fn lex_rank(n: usize, subset: &[usize]) -> u128 {
    let k = subset.len();
    let mut rank = 0u128;
    let mut prev = 0usize;
    for (i, &x) in subset.iter().enumerate() {
        for skipped in prev..x {
            rank += binomial(n - skipped - 1, k - i - 1);
        }
        prev = x + 1;
    }
    rank
}

/// Which of the equivalent MRSC characterizations to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MrscMode {
    /// Full rank of G0 on a k-set forces full rank of G there.
    Definition,
    /// Every k-core of the superdual is a k-core of the dual, via shortening.
    Cores,
    /// Parity-check form: rank(H|_{S^c}) = n - k on every k-core S.
    Parity,
    /// rank(G0|_S) = rank(G|_S) for every |S| <= k.
    AllSizes,
}

impl MrscMode {
    pub const ALL: [MrscMode; 4] = [
        MrscMode::Definition,
        MrscMode::Cores,
        MrscMode::Parity,
        MrscMode::AllSizes,
    ];
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MrscVerdict {
    pub holds: bool,
    pub witness: Option<SupportSet>,
    /// Subsets examined up to and including the witness.
    pub subsets_checked: u128,
}

/// Attached to every constructed code: the result of a full scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub verified: bool,
    pub subsets_checked: u128,
}

#[derive(Clone, Debug)]
pub struct CertifiedCode {
    pub code: LinearCode,
    pub certificate: Certificate,
}

/// Decides whether `code` is a maximally recoverable subcode of `sup`.
pub fn is_mrsc(code: &LinearCode, sup: &LinearCode, mode: MrscMode) -> Result<MrscVerdict> {
    code.subcode_factor(sup)?;
    let n = code.n();
    let k = code.dim();
    let g0 = sup.generator();
    let g = code.generator();

    let verdict = |sizes: &mut dyn Iterator<Item = usize>,
                   violates: &(dyn Fn(&[usize]) -> bool + Sync)|
     -> MrscVerdict {
        let mut checked = 0u128;
        for size in sizes {
            match first_violation(n, size, violates) {
                Some(w) => {
                    checked += lex_rank(n, &w) + 1;
                    return MrscVerdict {
                        holds: false,
                        witness: Some(SupportSet::new(n, w).expect("sorted")),
                        subsets_checked: checked,
                    };
                }
                None => checked += binomial(n, size),
            }
        }
        MrscVerdict {
            holds: true,
            witness: None,
            subsets_checked: checked,
        }
    };

    Ok(match mode {
        MrscMode::Definition => verdict(&mut std::iter::once(k), &|s: &[usize]| {
            g0.rank_of_columns(s) == k && g.rank_of_columns(s) < k
        }),
        MrscMode::Cores => {
            let dual0 = sup.dual();
            let dual = code.dual();
            verdict(&mut std::iter::once(k), &|s: &[usize]| {
                let set = SupportSet::new(n, s.to_vec()).expect("sorted");
                dual0.shorten(&set).expect("same length").dim() == 0
                    && dual.shorten(&set).expect("same length").dim() > 0
            })
        }
        MrscMode::Parity => {
            let h0 = sup.parity_matrix();
            let h = code.parity_matrix();
            let t = sup.dim();
            verdict(&mut std::iter::once(k), &|s: &[usize]| {
                let rest = complement(n, s);
                h0.rank_of_columns(&rest) == n - t && h.rank_of_columns(&rest) < n - k
            })
        }
        MrscMode::AllSizes => verdict(&mut (0..=k), &|s: &[usize]| {
            g0.rank_of_columns(s) != g.rank_of_columns(s)
        }),
    })
}

fn complement(n: usize, s: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(n - s.len());
    let mut j = 0;
    for i in 0..n {
        if j < s.len() && s[j] == i {
            j += 1;
        } else {
            out.push(i);
        }
    }
    out
}

/// Runs the definition scan and returns the certificate, or the witness
/// as an error.
pub fn certify(code: &LinearCode, sup: &LinearCode) -> Result<Certificate> {
    let v = is_mrsc(code, sup, MrscMode::Definition)?;
    if !v.holds {
        return Err(Error::CertificateFailed(v.witness));
    }
    Ok(Certificate {
        verified: true,
        subsets_checked: v.subsets_checked,
    })
}

/// The m x mK block-diagonal matrix with `a` repeated on the diagonal.
pub fn build_striped_matrix(field: &Field, a: &[u32], m: usize) -> Result<FieldMatrix> {
    if a.iter().all(|&v| v == 0) {
        return Err(Error::ZeroCodingVector);
    }
    let k = a.len();
    let mut out = FieldMatrix::zeros(field, m, m * k);
    for i in 0..m {
        for (j, &v) in a.iter().enumerate() {
            if !field.contains(v) {
                return Err(Error::NotAnElement {
                    value: v as u64,
                    order: field.order(),
                });
            }
            out.set(i, i * k + j, v);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityProfile {
    pub r: usize,
    pub delta: usize,
    pub ell: usize,
}

impl LocalityProfile {
    pub fn group_len(&self) -> usize {
        self.r + self.delta - 1
    }
}

/// Checks that the dual of `code` is spanned by block-diagonal local
/// checks, each block generating an [r+delta-1, delta-1] MDS code on its
/// group of consecutive coordinates.
pub fn check_locality(code: &LinearCode, profile: &LocalityProfile) -> Result<bool> {
    let n = code.n();
    let len = profile.group_len();
    if profile.delta == 0 || profile.ell == 0 || len * profile.ell != n {
        return Err(Error::LocalityShape {
            n,
            reason: format!(
                "{} groups of length {} do not tile the coordinates",
                profile.ell, len
            ),
        });
    }
    let dual = code.dual();
    let local_dim = profile.delta - 1;
    if dual.dim() != profile.ell * local_dim {
        return Ok(false);
    }
    for g in 0..profile.ell {
        let group = SupportSet::new(n, (g * len..(g + 1) * len).collect())?;
        let local = dual.shorten(&group)?;
        if local.dim() != local_dim || !is_mds(&local) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every set of dim columns is independent.
fn is_mds(code: &LinearCode) -> bool {
    let k = code.dim();
    first_violation(code.n(), k, |s| code.generator.rank_of_columns(s) < k).is_none()
}

/// Parameters (m', n', r', s') of the partial MDS array code matching an
/// [n, k] (r, delta) code with locality.
pub fn partial_mds_params(n: usize, k: usize, r: usize, delta: usize) -> Result<(usize, usize, usize, isize)> {
    let len = r + delta - 1;
    if len == 0 || !n.is_multiple_of(len) {
        return Err(Error::LocalityShape {
            n,
            reason: format!("group length {len} does not divide the length"),
        });
    }
    let rows = n / len;
    Ok((rows, len, delta - 1, (rows * r) as isize - k as isize))
}
