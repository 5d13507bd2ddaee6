use crate::error::{Error, Result};
use crate::linalg::FieldMatrix;

use super::{Field, FieldElement};

/// GF(q^t) viewed as a degree-t extension of a given GF(q).
///
/// The big field is the default field of order p^(m t). The base field sits
/// inside it through a fixed root of the base modulus, and `x^0..x^(t-1)`
/// serve as the basis over the base field.
#[derive(Clone, Debug)]
pub struct Extension {
    base: Field,
    ext: Field,
    degree: u32,
    /// Powers of the chosen root of the base modulus, 0..base.m.
    root_powers: Vec<u32>,
    lift_table: Option<Vec<u32>>,
    /// Inverse of the GF(p)-matrix taking coordinates to digits.
    coord_inverse: FieldMatrix,
}

impl Extension {
    pub fn new(base: &Field, degree: u32) -> Result<Extension> {
        if degree == 0 {
            return Err(Error::ZeroDegree);
        }
        let p = base.p();
        let ext = if degree == 1 {
            base.clone()
        } else {
            let big_m = base
                .degree()
                .checked_mul(degree)
                .ok_or(Error::OrderOverflow { p, m: u32::MAX })?;
            Field::new(p, big_m, None)?
        };
        let root = if degree == 1 {
            // base embeds as itself, so the root is x
            p
        } else if base.degree() == 1 {
            0
        } else {
            find_root(&ext, base.modulus())
        };
        let root_powers: Vec<u32> = if base.degree() == 1 {
            vec![1]
        } else {
            (0..base.degree()).map(|i| ext.pow(root, i as u64)).collect()
        };

        let mut ext_ = Extension {
            base: base.clone(),
            ext,
            degree,
            root_powers,
            lift_table: None,
            coord_inverse: FieldMatrix::zeros(&Field::prime(p)?, 0, 0),
        };
        if base.order() <= 1 << 16 {
            let table = (0..base.order()).map(|v| ext_.lift_slow(v)).collect();
            ext_.lift_table = Some(table);
        }
        ext_.coord_inverse = ext_.coordinate_matrix()?.inverse()?.ok_or_else(|| {
            Error::Dimension("embedded basis is not independent".to_string())
        })?;
        Ok(ext_)
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn ext(&self) -> &Field {
        &self.ext
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// The basis 1, x, ..., x^(t-1) of the extension over the base.
    pub fn basis(&self) -> Vec<u32> {
        let p = self.ext.p() as u64;
        (0..self.degree).map(|j| p.pow(j) as u32).collect()
    }

    fn lift_slow(&self, v: u32) -> u32 {
        self.base
            .digits(v)
            .iter()
            .zip(&self.root_powers)
            .fold(0, |acc, (&d, &r)| self.ext.add(acc, self.ext.mul(d, r)))
    }

    /// Image of a base-field element in the extension.
    pub fn lift(&self, v: u32) -> u32 {
        match &self.lift_table {
            Some(t) => t[v as usize],
            None => self.lift_slow(v),
        }
    }

    pub fn lift_matrix(&self, m: &FieldMatrix) -> Result<FieldMatrix> {
        if m.field() != &self.base {
            return Err(Error::FieldMismatch);
        }
        let data = m.data().iter().map(|&v| self.lift(v)).collect();
        FieldMatrix::new(&self.ext, m.rows(), m.cols(), data)
    }

    /// Coordinates of `a` over the base field, one per basis element.
    pub fn coordinates(&self, a: u32) -> Vec<u32> {
        let digits = self.ext.digits(a);
        let flat = self.coord_inverse.mul_vec(&digits).expect("square inverse");
        let bm = self.base.degree() as usize;
        flat.chunks(bm)
            .map(|chunk| self.base.from_digits(chunk))
            .collect()
    }

    /// Inverse of `lift` on the embedded base field.
    pub fn project(&self, a: u32) -> Option<u32> {
        let coords = self.coordinates(a);
        if coords[1..].iter().any(|&c| c != 0) {
            return None;
        }
        Some(coords[0])
    }

    /// Columns indexed by (j, i): digits of root^i * x^j.
    fn coordinate_matrix(&self) -> Result<FieldMatrix> {
        let prime = Field::prime(self.ext.p())?;
        let big_m = self.ext.degree() as usize;
        let basis = self.basis();
        let mut columns = Vec::with_capacity(big_m);
        for &xj in &basis {
            for &r in &self.root_powers {
                columns.push(self.ext.digits(self.ext.mul(r, xj)));
            }
        }
        let mut data = vec![0u32; big_m * big_m];
        for (c, col) in columns.iter().enumerate() {
            for (r, &d) in col.iter().enumerate() {
                data[r * big_m + c] = d;
            }
        }
        FieldMatrix::new(&prime, big_m, big_m, data)
    }
}

fn find_root(ext: &Field, modulus: &[u32]) -> u32 {
    (1..ext.order())
        .find(|&z| {
            modulus
                .iter()
                .rev()
                .fold(0, |acc, &c| ext.add(ext.mul(acc, z), c))
                == 0
        })
        .expect("a degree-m polynomial splits in every extension of degree divisible by m")
}

/// Basis of GF(Q) over its subfield of order q.
///
/// Returns the powers 1, x, ..., x^(t-1). They are independent over any
/// subfield: x generates GF(Q) over GF(p), hence also over GF(q), so its
/// minimal polynomial over GF(q) has degree t.
pub fn subfield_basis(field: &Field, q: u32) -> Result<Vec<FieldElement>> {
    let d = field.subfield_degree(q)?;
    let t = field.degree() / d;
    let p = field.p() as u64;
    (0..t).map(|j| field.element(p.pow(j) as u32)).collect()
}
