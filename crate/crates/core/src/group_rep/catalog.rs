use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use core::f64::consts::PI;

use super::group::{unit, FiniteGroup, Multiplier};
use super::rep::{intertwiner_space, Rep, REP_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, ONE, ZERO};

/// A labelled irreducible (projective) representation.
#[derive(Debug, Clone, PartialEq)]
pub struct Irrep {
    pub label: String,
    pub rep: Rep,
}

impl Irrep {
    /// Validates unitarity, the projective law and irreducibility.
    pub fn new(label: impl Into<String>, matrices: Vec<CMat>, group: &FiniteGroup) -> Result<Irrep> {
        let label = label.into();
        let rep = Rep::new(matrices, group)?;
        let schur = intertwiner_space(&rep, &rep)?.len();
        if schur != 1 {
            return Err(Error::IncompleteCatalog(format!("{label} is reducible (commutant dimension {schur})")));
        }
        Ok(Irrep { label, rep })
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn matrix(&self, g: usize) -> &CMat {
        self.rep.matrix(g)
    }

    pub fn multiplier(&self) -> Option<&Multiplier> {
        self.rep.multiplier()
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 1 && self.rep.matrices().iter().all(|m| (m[(0, 0)] - ONE).norm() <= REP_TOL)
    }
}

/// A group together with a list of its irreps.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    pub name: String,
    pub group: FiniteGroup,
    pub irreps: Vec<Irrep>,
}

fn one_dim(values: impl Iterator<Item = linalg::C64>) -> Vec<CMat> {
    values.map(|v| CMat::from_element(1, 1, v)).collect()
}

impl Catalog {
    pub fn new(name: impl Into<String>, group: FiniteGroup, irreps: Vec<Irrep>) -> Catalog {
        Catalog { name: name.into(), group, irreps }
    }

    pub fn get(&self, label: &str) -> Result<&Irrep> {
        self.irreps.iter().find(|i| i.label == label).ok_or_else(|| {
            let known: Vec<&str> = self.irreps.iter().map(|i| i.label.as_str()).collect();
            Error::UnknownIrrep(format!("{label:?} (catalog {} has {})", self.name, known.join(", ")))
        })
    }

    pub fn trivial(&self) -> Option<&Irrep> {
        self.irreps.iter().find(|i| i.is_trivial())
    }

    /// Irrep equivalent to `rep`, if any.
    pub fn identify(&self, rep: &Rep) -> Option<&Irrep> {
        self.irreps.iter().find(|irr| {
            irr.dim() == rep.dim() && intertwiner_space(rep, &irr.rep).map(|b| b.len() == 1).unwrap_or(false)
        })
    }

    /// Cyclic group `Z_n`: labels `chi0 … chi{n-1}`, `chi_k(r^a) = e^{2πi ka/n}`.
    pub fn cyclic(n: usize) -> Catalog {
        let group = FiniteGroup::cyclic(n);
        let irreps = (0..n)
            .map(|k| {
                let mats = one_dim((0..n).map(|a| unit(2.0 * PI * (k * a) as f64 / n as f64)));
                Irrep::new(format!("chi{k}"), mats, &group).expect("characters of Z_n")
            })
            .collect();
        Catalog::new(format!("Z{n}"), group, irreps)
    }

    /// Dihedral group of order `2n`. One-dimensional irreps `A1` (trivial),
    /// `A2` (`s ↦ −1`) and for even `n` also `B1`, `B2` (`r ↦ −1`);
    /// two-dimensional `rho{k}` with `r ↦ diag(e^{2πik/n}, e^{−2πik/n})`,
    /// `s ↦ [[0,1],[1,0]]`.
    pub fn dihedral(n: usize) -> Catalog {
        let group = FiniteGroup::dihedral(n);
        let order = 2 * n;
        let sign = |x: usize| if x == 0 { ONE } else { -ONE };
        let mut irreps = Vec::new();
        let mut push_1d = |label: &str, r: bool, s: bool| {
            let mats = one_dim((0..order).map(|x| {
                let (a, b) = (x % n, x / n);
                let rv = if r && a % 2 == 1 { -ONE } else { ONE };
                let sv = if s { sign(b) } else { ONE };
                rv * sv
            }));
            irreps.push(Irrep::new(label, mats, &group).expect("1-dim dihedral irrep"));
        };
        push_1d("A1", false, false);
        push_1d("A2", false, true);
        if n.is_multiple_of(2) {
            push_1d("B1", true, false);
            push_1d("B2", true, true);
        }
        for k in 1..=(n - 1) / 2 {
            let theta = 2.0 * PI * k as f64 / n as f64;
            let r = CMat::from_diagonal(&linalg::CVec::from_vec(alloc::vec![unit(theta), unit(-theta)]));
            let s = linalg::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]);
            let rep = Rep::from_generators(&group, &[(1, r), (n, s)]).expect("dihedral 2-dim irrep");
            irreps.push(Irrep::new(format!("rho{k}"), rep.matrices().to_vec(), &group).expect("irreducible"));
        }
        Catalog::new(format!("D{order}"), group, irreps)
    }

    /// Symmetric group `S3` realised as the dihedral group of order 6.
    pub fn symmetric3() -> Catalog {
        let mut cat = Catalog::dihedral(3);
        let rename = |l: &str| match l {
            "A1" => "trivial",
            "A2" => "sign",
            _ => "standard",
        };
        for irr in &mut cat.irreps {
            irr.label = rename(&irr.label).to_string();
        }
        cat.name = "S3".to_string();
        cat
    }

    /// Quaternion group `Q8`.
    pub fn quaternion() -> Catalog {
        let group = FiniteGroup::quaternion();
        let i = c(0.0, 1.0);
        let units = [
            linalg::identity(2),
            linalg::from_rows(&[&[i, ZERO], &[ZERO, -i]]),
            linalg::from_rows(&[&[ZERO, ONE], &[-ONE, ZERO]]),
            linalg::from_rows(&[&[ZERO, i], &[i, ZERO]]),
        ];
        let spinor: Vec<CMat> = (0..8).map(|x| if x < 4 { units[x].clone() } else { -&units[x % 4] }).collect();
        let character = |fixed: usize| {
            one_dim((0..8).map(move |x| {
                let u = x % 4;
                if u == 0 || u == fixed {
                    ONE
                } else {
                    -ONE
                }
            }))
        };
        let irreps = alloc::vec![
            Irrep::new("trivial", one_dim((0..8).map(|_| ONE)), &group).expect("trivial"),
            Irrep::new("chi_i", character(1), &group).expect("character"),
            Irrep::new("chi_j", character(2), &group).expect("character"),
            Irrep::new("chi_k", character(3), &group).expect("character"),
            Irrep::new("spinor", spinor, &group).expect("spinor"),
        ];
        Catalog::new("Q8", group, irreps)
    }

    /// `Z2 × Z2` with its projective Pauli irrep (index `a + 2b ↦ X^a Z^b`).
    pub fn klein_pauli() -> Catalog {
        let z2 = FiniteGroup::cyclic(2);
        let group = z2.direct_product(&z2);
        let x = linalg::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]);
        let z = linalg::from_rows(&[&[ONE, ZERO], &[ZERO, -ONE]]);
        let mats = alloc::vec![linalg::identity(2), x.clone(), z.clone(), &x * &z];
        let irreps = alloc::vec![Irrep::new("pauli", mats, &group).expect("Pauli irrep")];
        Catalog::new("Z2xZ2-pauli", group, irreps)
    }

    /// Looks up a built-in catalog: `Z<n>` (n ≤ 12), `D<2n>` (n ≤ 6), `S3`,
    /// `Q8`, `Z2xZ2-pauli`.
    pub fn builtin(name: &str) -> Result<Catalog> {
        let unknown = || Error::UnknownIrrep(format!("catalog {name:?}"));
        match name {
            "S3" => Ok(Catalog::symmetric3()),
            "Q8" => Ok(Catalog::quaternion()),
            "Z2xZ2-pauli" => Ok(Catalog::klein_pauli()),
            _ => {
                let (head, tail) = name.split_at(1);
                let k: usize = tail.parse().map_err(|_| unknown())?;
                match head {
                    "Z" if (1..=12).contains(&k) => Ok(Catalog::cyclic(k)),
                    "D" if k.is_multiple_of(2) && (4..=12).contains(&k) => Ok(Catalog::dihedral(k / 2)),
                    _ => Err(unknown()),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_rep::rep::check_projective_rep;

    #[test]
    fn builtin_catalogs_are_complete() {
        for name in ["Z1", "Z5", "Z12", "D4", "D10", "D12", "S3", "Q8"] {
            let cat = Catalog::builtin(name).unwrap();
            let sum: usize = cat.irreps.iter().map(|i| i.dim() * i.dim()).sum();
            assert_eq!(sum, cat.group.order(), "{name}");
        }
    }

    #[test]
    fn pauli_multiplier_is_nontrivial() {
        let cat = Catalog::klein_pauli();
        let m = check_projective_rep(cat.irreps[0].rep.matrices(), &cat.group).unwrap();
        assert!(!m.is_trivial(1e-9));
        assert!(m.values().iter().all(|v| (v.re.abs() - 1.0).abs() < 1e-12 && v.im.abs() < 1e-12));
    }

    #[test]
    fn unknown_catalogs_are_rejected() {
        assert!(Catalog::builtin("Z13").is_err());
        assert!(Catalog::builtin("D14").is_err());
        assert!(Catalog::builtin("X3").is_err());
    }
}
