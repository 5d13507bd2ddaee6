//! Constructions of maximally recoverable subcodes.
//!
//! Every route returns its code together with a [`Certificate`] from a full
//! definition scan. Field-size sufficiency bounds are not consulted; a
//! construction over a small field either certifies or reports why not.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codes::{certify, first_violation, is_mrsc, lex_rank, Certificate, CertifiedCode, LinearCode, MrscMode, MrscVerdict};
use crate::error::{Error, Result};
use crate::gf::{Extension, Field};
use crate::linalg::{binomial, FieldMatrix, SupportSet};

pub(crate) fn random_matrix(field: &Field, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> FieldMatrix {
    let data = (0..rows * cols).map(|_| rng.gen_range(0..field.order())).collect();
    FieldMatrix::new(field, rows, cols, data).expect("entries drawn from the field")
}

/// Random k-dimensional subcode `S * G0`, redrawn until it certifies.
pub fn construct_random_mrsc(c0: &LinearCode, k: usize, seed: u64, max_tries: usize) -> Result<CertifiedCode> {
    let t = c0.dim();
    if k > t {
        return Err(Error::DimensionTooLarge { k, max: t });
    }
    if k == 0 || k == t {
        let code = if k == 0 { LinearCode::zero(c0.field(), c0.n()) } else { c0.clone() };
        let certificate = certify(&code, c0)?;
        return Ok(CertifiedCode { code, certificate });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut latest = None;
    for _ in 0..max_tries {
        let s = random_matrix(c0.field(), k, t, &mut rng);
        let g = s.mul(c0.generator())?;
        let Ok(code) = LinearCode::new(g) else {
            continue;
        };
        let verdict = is_mrsc(&code, c0, MrscMode::Definition)?;
        if verdict.holds {
            let certificate = Certificate {
                verified: true,
                subsets_checked: verdict.subsets_checked,
            };
            return Ok(CertifiedCode { code, certificate });
        }
        latest = verdict.witness;
    }
    Err(Error::TriesExhausted {
        tries: max_tries,
        witness: latest,
    })
}

/// Rows `beta^(q^i)` for i in 0..depth.
#[derive(Clone, Debug)]
pub struct MooreMatrix {
    field: Field,
    q: u32,
    evaluations: Vec<u32>,
    depth: usize,
}

impl MooreMatrix {
    pub fn new(field: &Field, q: u32, evaluations: Vec<u32>, depth: usize) -> Result<MooreMatrix> {
        field.subfield_degree(q)?;
        if let Some(&bad) = evaluations.iter().find(|&&v| !field.contains(v)) {
            return Err(Error::NotAnElement {
                value: bad as u64,
                order: field.order(),
            });
        }
        Ok(MooreMatrix {
            field: field.clone(),
            q,
            evaluations,
            depth,
        })
    }

    pub fn evaluations(&self) -> &[u32] {
        &self.evaluations
    }

    pub fn matrix(&self) -> FieldMatrix {
        let n = self.evaluations.len();
        let mut m = FieldMatrix::zeros(&self.field, self.depth, n);
        let mut row: Vec<u32> = self.evaluations.clone();
        for i in 0..self.depth {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
            for v in row.iter_mut() {
                *v = self.field.pow(*v, self.q as u64);
            }
        }
        m
    }
}

/// A code built over an extension of the superset code's field.
#[derive(Clone, Debug)]
pub struct LiftedCode {
    pub extension: Extension,
    /// The superset code with its generator lifted to the extension.
    pub superset: LinearCode,
    pub code: CertifiedCode,
}

/// `[beta_1 .. beta_n] = [alpha_1 .. alpha_t] * B` over the extension.
fn evaluation_points(ext: &Extension, b: &FieldMatrix) -> Vec<u32> {
    let f = ext.ext();
    let alpha = ext.basis();
    (0..b.cols())
        .map(|j| {
            (0..b.rows()).fold(0, |acc, i| f.add(acc, f.mul(alpha[i], ext.lift(b.get(i, j)))))
        })
        .collect()
}

/// Moore-matrix subcode over GF(q^t), t = dim C0.
pub fn construct_linearized_mrsc(c0: &LinearCode, k: usize) -> Result<LiftedCode> {
    let t = c0.dim();
    if k > t {
        return Err(Error::DimensionTooLarge { k, max: t });
    }
    let ext = Extension::new(c0.field(), t.max(1) as u32)?;
    let superset = LinearCode::new(ext.lift_matrix(c0.generator())?)?;
    let beta = evaluation_points(&ext, c0.generator());
    let moore = MooreMatrix::new(ext.ext(), c0.field().order(), beta, k)?;
    let code = LinearCode::new(moore.matrix()).map_err(|_| Error::CertificateFailed(None))?;
    let certificate = certify(&code, &superset)?;
    Ok(LiftedCode {
        extension: ext,
        superset,
        code: CertifiedCode { code, certificate },
    })
}

/// `[G0 | tail]` together with its parts.
#[derive(Clone, Debug)]
pub struct CodeExtension {
    pub base: LinearCode,
    pub tail: FieldMatrix,
    pub extended: LinearCode,
}

impl CodeExtension {
    pub fn delta(&self) -> usize {
        self.tail.cols()
    }
}

pub fn extend_code(c0: &LinearCode, tail: &FieldMatrix) -> Result<CodeExtension> {
    if tail.rows() != c0.dim() {
        return Err(Error::Dimension(format!(
            "tail has {} rows for a code of dimension {}",
            tail.rows(),
            c0.dim()
        )));
    }
    if tail.cols() >= c0.dim() && tail.cols() > 0 {
        return Err(Error::DimensionTooLarge {
            k: tail.cols(),
            max: c0.dim().saturating_sub(1),
        });
    }
    let extended = LinearCode::new(c0.generator().hstack(tail)?)?;
    Ok(CodeExtension {
        base: c0.clone(),
        tail: tail.clone(),
        extended,
    })
}

/// Scans every S of size t - delta for
/// `rank(G0e on S plus the tail) = rank(G0 on S) + delta`.
pub fn check_extension_property(ext: &CodeExtension) -> MrscVerdict {
    let n = ext.base.n();
    let delta = ext.delta();
    let size = ext.base.dim() - delta;
    let g0 = ext.base.generator();
    let ge = ext.extended.generator();
    let witness = first_violation(n, size, |s| {
        let mut cols = s.to_vec();
        cols.extend(n..n + delta);
        ge.rank_of_columns(&cols) != g0.rank_of_columns(s) + delta
    });
    match witness {
        Some(w) => MrscVerdict {
            holds: false,
            subsets_checked: lex_rank(n, &w) + 1,
            witness: Some(SupportSet::new(n, w).expect("sorted")),
        },
        None => MrscVerdict {
            holds: true,
            witness: None,
            subsets_checked: binomial(n, size),
        },
    }
}

/// Shortens the extension back onto the original coordinates.
pub fn shorten_extension(ext: &CodeExtension) -> Result<CertifiedCode> {
    let verdict = check_extension_property(ext);
    if let Some(w) = verdict.witness {
        return Err(Error::ExtensionPropertyViolated(w));
    }
    let n = ext.base.n();
    let first = SupportSet::new(n + ext.delta(), (0..n).collect())?;
    let code = ext.extended.shorten(&first)?;
    let certificate = certify(&code, &ext.base)?;
    Ok(CertifiedCode { code, certificate })
}

/// Converse direction: from an MRSC `c` of `c0`, an extension of `c0`
/// whose shortening gives back `c`.
///
/// Takes a parity matrix `[H0; He]` of `c` and the extension whose parity
/// matrix is `[H0 0; He I]`, then rewrites its generator as `[G0 | Q]`.
pub fn extension_from_mrsc(c0: &LinearCode, c: &LinearCode) -> Result<CodeExtension> {
    c.subcode_factor(c0)?;
    let field = c0.field();
    let n = c0.n();
    let delta = c0.dim() - c.dim();
    let h0 = c0.parity_matrix();
    // complete H0 to a parity matrix of c
    let hc = c.parity_matrix();
    let mut he_rows = Vec::new();
    let mut acc = h0.clone();
    for r in 0..hc.rows() {
        let row = hc.select_rows(&[r])?;
        let next = acc.vstack(&row)?;
        if next.rank() > acc.rank() {
            acc = next;
            he_rows.push(r);
        }
    }
    let he = hc.select_rows(&he_rows)?;
    debug_assert_eq!(he.rows(), delta);
    let top = h0.hstack(&FieldMatrix::zeros(field, h0.rows(), delta))?;
    let bottom = he.hstack(&FieldMatrix::identity(field, delta))?;
    let parity = top.vstack(&bottom)?;
    let p = parity.kernel_basis();
    let head = p.select_columns(&(0..n).collect::<Vec<_>>())?;
    let tail = p.select_columns(&(n..n + delta).collect::<Vec<_>>())?;
    let x = head.solve_left(c0.generator())?.ok_or(Error::NotSubcode)?;
    extend_code(c0, &x.mul(&tail)?)
}

/// Reed-Solomon tail: `Q[j][i] = x_j^i` over the first m nonzero elements.
pub fn vandermonde_tail(field: &Field, m: usize, delta: usize) -> Result<FieldMatrix> {
    if delta > 0 && (field.order() as usize) <= m {
        return Err(Error::FieldTooSmall {
            q: field.order(),
            needed: m as u32,
        });
    }
    let mut q = FieldMatrix::zeros(field, m, delta);
    for j in 0..m {
        for i in 0..delta {
            q.set(j, i, field.pow(j as u32 + 1, i as u64));
        }
    }
    Ok(q)
}

#[derive(Clone, Debug)]
pub struct StripedMrsc {
    pub a: FieldMatrix,
    pub extension: Option<CodeExtension>,
    pub code: CertifiedCode,
}

/// 2eps-dimensional MRSC of the striped code `diag(a, .., a)` by extending
/// with a Vandermonde tail and shortening.
pub fn construct_striped_mrsc(field: &Field, a: &[u32], m: usize, eps: usize) -> Result<StripedMrsc> {
    let a_mat = crate::codes::build_striped_matrix(field, a, m)?;
    if m < 2 * eps {
        return Err(Error::TooFewStripes { m, eps });
    }
    let c_a = LinearCode::new(a_mat.clone())?;
    if eps == 0 {
        let code = LinearCode::zero(field, c_a.n());
        let certificate = certify(&code, &c_a)?;
        return Ok(StripedMrsc {
            a: a_mat,
            extension: None,
            code: CertifiedCode { code, certificate },
        });
    }
    let delta = m - 2 * eps;
    if delta == 0 {
        let certificate = certify(&c_a, &c_a)?;
        return Ok(StripedMrsc {
            a: a_mat,
            extension: None,
            code: CertifiedCode { code: c_a, certificate },
        });
    }
    let tail = vandermonde_tail(field, m, delta)?;
    let ext = extend_code(&c_a, &tail)?;
    let code = shorten_extension(&ext)?;
    Ok(StripedMrsc {
        a: a_mat,
        extension: Some(ext),
        code,
    })
}

/// An MRSC of `outer` of dimension `k` that must contain `inner`.
#[derive(Clone, Debug)]
pub struct SandwichSpec {
    pub outer: LinearCode,
    pub inner: LinearCode,
    pub k: usize,
}

impl SandwichSpec {
    pub fn new(outer: LinearCode, inner: LinearCode, k: usize) -> Result<SandwichSpec> {
        inner.subcode_factor(&outer)?;
        if k > outer.dim() {
            return Err(Error::DimensionTooLarge { k, max: outer.dim() });
        }
        if k < inner.dim() {
            return Err(Error::Dimension(format!(
                "target dimension {k} is below the inner dimension {}",
                inner.dim()
            )));
        }
        Ok(SandwichSpec { outer, inner, k })
    }
}

/// The inner code must have full rank s on every k-core of the outer dual.
pub fn check_sandwich_necessary(spec: &SandwichSpec) -> MrscVerdict {
    let n = spec.outer.n();
    let k = spec.k;
    let s = spec.inner.dim();
    let g0 = spec.outer.generator();
    let gh = spec.inner.generator();
    let witness = first_violation(n, k, |set| g0.rank_of_columns(set) == k && gh.rank_of_columns(set) < s);
    match witness {
        Some(w) => MrscVerdict {
            holds: false,
            subsets_checked: lex_rank(n, &w) + 1,
            witness: Some(SupportSet::new(n, w).expect("sorted")),
        },
        None => MrscVerdict {
            holds: true,
            witness: None,
            subsets_checked: binomial(n, k),
        },
    }
}

fn require_sandwich(spec: &SandwichSpec) -> Result<()> {
    match check_sandwich_necessary(spec).witness {
        Some(w) => Err(Error::SandwichConditionFails(w)),
        None => Ok(()),
    }
}

/// Parity route: `H = [H0; dH]` with the rows of dH random words of the
/// inner dual, so the resulting code always contains the inner code.
pub fn construct_sandwiched_random(spec: &SandwichSpec, seed: u64, max_tries: usize) -> Result<CertifiedCode> {
    require_sandwich(spec)?;
    let outer = &spec.outer;
    let t = outer.dim();
    let k = spec.k;
    if k == spec.inner.dim() {
        let certificate = certify(&spec.inner, outer)?;
        return Ok(CertifiedCode {
            code: spec.inner.clone(),
            certificate,
        });
    }
    let field = outer.field();
    let h0 = outer.parity_matrix();
    let inner_dual = spec.inner.parity_matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut latest = None;
    for _ in 0..max_tries {
        let coeffs = random_matrix(field, t - k, inner_dual.rows(), &mut rng);
        let h = h0.vstack(&coeffs.mul(&inner_dual)?)?;
        if h.rank() != outer.n() - k {
            continue;
        }
        let code = LinearCode::new(h.kernel_basis())?;
        if !code.contains(&spec.inner)? {
            continue;
        }
        let verdict = is_mrsc(&code, outer, MrscMode::Definition)?;
        if verdict.holds {
            let certificate = Certificate {
                verified: true,
                subsets_checked: verdict.subsets_checked,
            };
            return Ok(CertifiedCode { code, certificate });
        }
        latest = verdict.witness;
    }
    Err(Error::TriesExhausted {
        tries: max_tries,
        witness: latest,
    })
}

/// Completes the inner generator to a basis of the outer code with rows of
/// the outer generator, taken greedily in order.
fn completion(spec: &SandwichSpec) -> Result<FieldMatrix> {
    let g0 = spec.outer.generator();
    let mut acc = spec.inner.generator().clone();
    let mut picked = Vec::new();
    for r in 0..g0.rows() {
        let next = acc.vstack(&g0.select_rows(&[r])?)?;
        if next.rank() > acc.rank() {
            acc = next;
            picked.push(r);
        }
    }
    g0.select_rows(&picked)
}

/// Generator route: `G = [inner; Moore(alpha * B)]` over GF(q^(t-s)).
pub fn construct_sandwiched_linearized(spec: &SandwichSpec) -> Result<LiftedCode> {
    require_sandwich(spec)?;
    let s = spec.inner.dim();
    let t = spec.outer.dim();
    let base = spec.outer.field();
    let ext = Extension::new(base, (t - s).max(1) as u32)?;
    let superset = LinearCode::new(ext.lift_matrix(spec.outer.generator())?)?;
    let inner = ext.lift_matrix(spec.inner.generator())?;
    let b = completion(spec)?;
    let beta = evaluation_points(&ext, &b);
    let moore = MooreMatrix::new(ext.ext(), base.order(), beta, spec.k - s)?;
    let g = inner.vstack(&moore.matrix())?;
    let code = LinearCode::new(g).map_err(|_| Error::CertificateFailed(None))?;
    let certificate = certify(&code, &superset)?;
    Ok(LiftedCode {
        extension: ext,
        superset,
        code: CertifiedCode { code, certificate },
    })
}
