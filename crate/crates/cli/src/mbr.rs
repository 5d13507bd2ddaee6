//! Product-matrix MBR code with N = 5, K = 3, D = 4, α = 4, β = 1.
//!
//! Node i stores ψ_i M, with M the symmetric 4×4 message matrix holding
//! m1..m9 and a zero in the corner.

use supdate_core::{Error, Field, FieldMatrix, Result};

pub const NODES: usize = 5;
pub const ALPHA: usize = 4;
pub const SYMBOLS: usize = 9;

/// Position of each message symbol (0-based) inside M.
pub const INDEX_MAP: [[Option<usize>; ALPHA]; ALPHA] = [
    [Some(0), Some(1), Some(2), Some(6)],
    [Some(1), Some(3), Some(4), Some(7)],
    [Some(2), Some(4), Some(5), Some(8)],
    [Some(6), Some(7), Some(8), None],
];

#[derive(Clone, Debug)]
pub struct MbrLayout {
    field: Field,
    gamma: u32,
    psi: FieldMatrix,
}

impl MbrLayout {
    /// `gamma` defaults to the smallest primitive element.
    pub fn new(field: &Field, gamma: Option<u32>) -> Result<MbrLayout> {
        let gamma = gamma.unwrap_or_else(|| field.primitive_element());
        if !field.contains(gamma) {
            return Err(Error::NotAnElement {
                value: gamma as u64,
                order: field.order(),
            });
        }
        let rows: Vec<Vec<u32>> = (1..=NODES as u64)
            .map(|i| {
                let g = field.pow(gamma, i);
                (0..ALPHA as u64).map(|j| field.pow(g, j)).collect()
            })
            .collect();
        Ok(MbrLayout {
            field: field.clone(),
            gamma,
            psi: FieldMatrix::from_rows(field, &rows)?,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn gamma(&self) -> u32 {
        self.gamma
    }

    pub fn psi(&self) -> &FieldMatrix {
        &self.psi
    }

    fn psi_row(&self, node: usize) -> Result<&[u32]> {
        if node == 0 || node > NODES {
            return Err(Error::IndexOutOfRange { index: node, len: NODES });
        }
        Ok(self.psi.row(node - 1))
    }

    /// 4×9 block: row j is column j of ψ_i M written in m1..m9.
    pub fn node_block(&self, node: usize) -> Result<FieldMatrix> {
        let f = &self.field;
        let psi = self.psi_row(node)?;
        let mut out = FieldMatrix::zeros(f, ALPHA, SYMBOLS);
        for (j, _) in INDEX_MAP.iter().enumerate() {
            for (r, row) in INDEX_MAP.iter().enumerate() {
                if let Some(idx) = row[j] {
                    let v = f.add(out.get(j, idx), psi[r]);
                    out.set(j, idx, v);
                }
            }
        }
        Ok(out)
    }

    /// ψ_i M ψ_jᵀ written in m1..m9.
    pub fn common_codeword(&self, i: usize, j: usize) -> Result<Vec<u32>> {
        if i == j {
            return Err(Error::Dimension(format!("nodes {i} and {j} coincide")));
        }
        let f = &self.field;
        let (pi, pj) = (self.psi_row(i)?, self.psi_row(j)?);
        let mut c = vec![0u32; SYMBOLS];
        for (r, row) in INDEX_MAP.iter().enumerate() {
            for (s, entry) in row.iter().enumerate() {
                if let Some(idx) = *entry {
                    c[idx] = f.add(c[idx], f.mul(pi[r], pj[s]));
                }
            }
        }
        Ok(c)
    }
}

pub fn block_diagonal(block: &FieldMatrix, m: usize) -> FieldMatrix {
    let (r, c) = (block.rows(), block.cols());
    let mut out = FieldMatrix::zeros(block.field(), r * m, c * m);
    for s in 0..m {
        for i in 0..r {
            for j in 0..c {
                out.set(s * r + i, s * c + j, block.get(i, j));
            }
        }
    }
    out
}

/// Node i's content over m stripes as a 4m × 9m matrix.
pub fn build_mbr_node_matrix(node: usize, m: usize, field: &Field, gamma: Option<u32>) -> Result<FieldMatrix> {
    let layout = MbrLayout::new(field, gamma)?;
    Ok(block_diagonal(&layout.node_block(node)?, m))
}

pub fn mbr_common_codeword(i: usize, j: usize, field: &Field, gamma: Option<u32>) -> Result<Vec<u32>> {
    MbrLayout::new(field, gamma)?.common_codeword(i, j)
}
