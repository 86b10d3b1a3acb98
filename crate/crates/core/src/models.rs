//! Coupling matrices of the open transverse-field Ising and XY chains after
//! the Jordan-Wigner map `f_j = σ⁻_j ∏_{k<j} σᶻ_k`, with Majoranas
//! `c_{2j-1} = f_j + f_j†`, `c_{2j} = -i (f_j - f_j†)`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gaussian::CouplingMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// `H = -Σ σˣ_j σˣ_{j+1} - h Σ σᶻ_j`
    Ising,
    /// `H = Σ (σˣ_j σˣ_{j+1} + σʸ_j σʸ_{j+1}) + h Σ σᶻ_j`
    Xy,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Ising => "ising",
            ModelKind::Xy => "xy",
        })
    }
}

impl FromStr for ModelKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "ising" => Ok(ModelKind::Ising),
            "xy" => Ok(ModelKind::Xy),
            other => Err(format!("unknown model '{other}'")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub n: usize,
    pub h: f64,
}

impl ModelSpec {
    pub fn new(kind: ModelKind, n: usize, h: f64) -> Self {
        ModelSpec { kind, n, h }
    }

    pub fn with_sites(self, n: usize) -> Self {
        ModelSpec { n, ..self }
    }
}

/// A coupling matrix plus the constant `c` with `H_spin = (i/4) c^T A c + c`.
#[derive(Clone, Debug, PartialEq)]
pub struct BuiltModel {
    pub coupling: CouplingMatrix,
    pub constant: f64,
}

fn skew_from_upper(dim: usize, entries: &[(usize, usize, f64)]) -> CouplingMatrix {
    let mut a = DMatrix::zeros(dim, dim);
    for &(i, j, v) in entries {
        a[(i, j)] += v;
        a[(j, i)] -= v;
    }
    CouplingMatrix::from_skew_unchecked(a)
}

/// Transverse-field Ising chain. A field term `-h σᶻ_j` becomes
/// `-h · i c_{2j-1} c_{2j}` and a bond `-σˣ_j σˣ_{j+1}` becomes
/// `-i c_{2j} c_{2j+1}`; no constant is generated. The ground state is that
/// of the spin chain itself, not of its image under `∏_{j odd} σᶻ_j`.
pub fn ising_coupling(n: usize, h: f64) -> Result<BuiltModel> {
    if n < 2 {
        return Err(Error::TooFewSites(n));
    }
    let mut entries = Vec::with_capacity(2 * n);
    for j in 0..n {
        entries.push((2 * j, 2 * j + 1, -2.0 * h));
    }
    for j in 0..n - 1 {
        entries.push((2 * j + 1, 2 * j + 2, -2.0));
    }
    Ok(BuiltModel { coupling: skew_from_upper(2 * n, &entries), constant: 0.0 })
}

/// XY (XX) chain: `σˣσˣ + σʸσʸ` on a bond becomes
/// `i c_{2j} c_{2j+1} - i c_{2j-1} c_{2j+2}`, and `h σᶻ_j = h · i c_{2j-1} c_{2j}`.
pub fn xy_coupling(n: usize, h: f64) -> Result<BuiltModel> {
    if n < 2 {
        return Err(Error::TooFewSites(n));
    }
    let mut entries = Vec::with_capacity(3 * n);
    for j in 0..n {
        entries.push((2 * j, 2 * j + 1, 2.0 * h));
    }
    for j in 0..n - 1 {
        entries.push((2 * j + 1, 2 * j + 2, 2.0));
        entries.push((2 * j, 2 * j + 3, -2.0));
    }
    Ok(BuiltModel { coupling: skew_from_upper(2 * n, &entries), constant: 0.0 })
}

pub fn build(spec: &ModelSpec) -> Result<BuiltModel> {
    match spec.kind {
        ModelKind::Ising => ising_coupling(spec.n, spec.h),
        ModelKind::Xy => xy_coupling(spec.n, spec.h),
    }
}

/// Open-chain single-particle energies of the XY model, `|2h - 4 cos(kπ/(n+1))|`.
pub fn xy_single_particle_energies(n: usize, h: f64) -> Vec<f64> {
    let mut e: Vec<f64> =
        (1..=n).map(|k| (2.0 * h - 4.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos()).abs()).collect();
    e.sort_by(|x, y| y.partial_cmp(x).unwrap());
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{canonical_block_diagonalize, ground_state_correlation};

    fn nonzeros(a: &DMatrix<f64>) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                if a[(i, j)] != 0.0 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    #[test]
    fn ising_two_sites_zero_field_has_single_bond() {
        let m = ising_coupling(2, 0.0).unwrap();
        assert_eq!(nonzeros(m.coupling.matrix()), vec![(1, 2), (2, 1)]);
        assert_eq!(m.coupling.matrix()[(1, 2)], -2.0);
    }

    #[test]
    fn couplings_are_local_and_skew() {
        for kind in [ModelKind::Ising, ModelKind::Xy] {
            let m = build(&ModelSpec::new(kind, 6, 0.7)).unwrap();
            let a = m.coupling.matrix();
            for (i, j) in nonzeros(a) {
                assert!(i.abs_diff(j) <= 3);
                assert_eq!(a[(i, j)], -a[(j, i)]);
            }
        }
    }

    #[test]
    fn build_dispatches() {
        let s = ModelSpec::new(ModelKind::Ising, 2, 1.0);
        assert_eq!(build(&s).unwrap(), ising_coupling(2, 1.0).unwrap());
        let s = ModelSpec::new(ModelKind::Xy, 4, 0.0);
        assert_eq!(build(&s).unwrap(), xy_coupling(4, 0.0).unwrap());
        let s = ModelSpec::new(ModelKind::Ising, 1, 1.0);
        assert_eq!(build(&s), Err(Error::TooFewSites(1)));
    }

    #[test]
    fn xy_energies_match_hopping_chain() {
        for n in [3, 4, 7] {
            let m = xy_coupling(n, 0.3).unwrap();
            let d = canonical_block_diagonalize(m.coupling.matrix()).unwrap();
            let e = xy_single_particle_energies(n, 0.3);
            for (x, y) in d.block_values.iter().zip(&e) {
                assert!((x - y).abs() < 1e-12);
            }
        }
        assert!(ground_state_correlation(&xy_coupling(3, 0.0).unwrap().coupling).is_err());
        assert!(ground_state_correlation(&xy_coupling(4, 0.0).unwrap().coupling).is_ok());
    }

    #[test]
    fn kind_round_trips_through_strings() {
        for k in [ModelKind::Ising, ModelKind::Xy] {
            assert_eq!(k.to_string().parse::<ModelKind>().unwrap(), k);
        }
        assert!("heisenberg".parse::<ModelKind>().is_err());
    }
}
