//! JSON file formats. Elements are written as their canonical integers.

use serde::{Deserialize, Serialize};
use supdate_core::broadcast::{BroadcastScheme, Regime, ThetaReport};
use supdate_core::codes::Certificate;
use supdate_core::update::P2PScheme;
use supdate_core::{Error, Field, FieldMatrix, LinearCode, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub p: u32,
    pub m: u32,
    /// Little-endian coefficients; the default modulus when absent.
    #[serde(default)]
    pub modulus: Option<Vec<u32>>,
}

impl FieldJson {
    pub fn from_field(f: &Field) -> FieldJson {
        FieldJson {
            p: f.p(),
            m: f.degree(),
            modulus: Some(f.modulus().to_vec()),
        }
    }

    pub fn to_field(&self) -> Result<Field> {
        Field::new(self.p, self.m, self.modulus.as_deref())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub field: FieldJson,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<u32>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &FieldMatrix) -> MatrixJson {
        MatrixJson {
            field: FieldJson::from_field(m.field()),
            rows: m.rows(),
            cols: m.cols(),
            data: m.to_rows(),
        }
    }

    pub fn to_matrix(&self) -> Result<FieldMatrix> {
        let f = self.field.to_field()?;
        self.to_matrix_over(&f)
    }

    fn to_matrix_over(&self, f: &Field) -> Result<FieldMatrix> {
        if self.data.len() != self.rows || self.data.iter().any(|r| r.len() != self.cols) {
            return Err(Error::Dimension(format!(
                "declared {}x{} but data does not match",
                self.rows, self.cols
            )));
        }
        let flat: Vec<u32> = self.data.iter().flatten().copied().collect();
        FieldMatrix::new(f, self.rows, self.cols, flat)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeJson {
    #[serde(flatten)]
    pub generator: MatrixJson,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl CodeJson {
    pub fn from_code(c: &LinearCode, certificate: Option<Certificate>) -> CodeJson {
        CodeJson {
            generator: MatrixJson::from_matrix(c.generator()),
            n: c.n(),
            certificate,
        }
    }

    pub fn to_code(&self) -> Result<LinearCode> {
        let g = self.generator.to_matrix()?;
        if g.cols() != self.n {
            return Err(Error::Dimension(format!("n = {} but {} columns", self.n, g.cols())));
        }
        LinearCode::new(g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeJson {
    pub a: MatrixJson,
    pub h: MatrixJson,
    pub s: MatrixJson,
    pub eps: usize,
    #[serde(default)]
    pub certificate: Option<Certificate>,
}

impl SchemeJson {
    pub fn from_scheme(s: &P2PScheme) -> SchemeJson {
        SchemeJson {
            a: MatrixJson::from_matrix(s.a()),
            h: MatrixJson::from_matrix(s.h()),
            s: MatrixJson::from_matrix(s.s()),
            eps: s.eps(),
            certificate: s.certificate().cloned(),
        }
    }

    pub fn to_scheme(&self) -> Result<P2PScheme> {
        let a = self.a.to_matrix()?;
        let f = a.field().clone();
        P2PScheme::from_parts(
            a,
            self.eps,
            self.h.to_matrix_over(&f)?,
            self.s.to_matrix_over(&f)?,
            self.certificate.clone(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BroadcastJson {
    pub eps: usize,
    pub regime: Regime,
    pub h: MatrixJson,
    pub t_a: MatrixJson,
    pub t_b: MatrixJson,
    pub h_hat: MatrixJson,
    #[serde(default)]
    pub theta: Option<ThetaReport>,
    pub receiver_a: SchemeJson,
    pub receiver_b: SchemeJson,
}

impl BroadcastJson {
    pub fn from_scheme(s: &BroadcastScheme) -> BroadcastJson {
        BroadcastJson {
            eps: s.eps,
            regime: s.regime,
            h: MatrixJson::from_matrix(&s.h),
            t_a: MatrixJson::from_matrix(&s.t_a),
            t_b: MatrixJson::from_matrix(&s.t_b),
            h_hat: MatrixJson::from_matrix(&s.h_hat),
            theta: s.theta.clone(),
            receiver_a: SchemeJson::from_scheme(&s.receiver_a),
            receiver_b: SchemeJson::from_scheme(&s.receiver_b),
        }
    }

    /// Rebuilds the scheme, checking `H_X = T_X H` for both receivers.
    pub fn to_scheme(&self) -> Result<BroadcastScheme> {
        let h = self.h.to_matrix()?;
        let f = h.field().clone();
        let t_a = self.t_a.to_matrix_over(&f)?;
        let t_b = self.t_b.to_matrix_over(&f)?;
        let receiver_a = self.receiver_a.to_scheme()?;
        let receiver_b = self.receiver_b.to_scheme()?;
        if t_a.mul(&h)? != *receiver_a.h() || t_b.mul(&h)? != *receiver_b.h() {
            return Err(Error::NotSubcode);
        }
        Ok(BroadcastScheme {
            eps: self.eps,
            regime: self.regime,
            h,
            t_a,
            t_b,
            h_hat: self.h_hat.to_matrix_over(&f)?,
            theta: self.theta.clone(),
            receiver_a,
            receiver_b,
        })
    }
}
