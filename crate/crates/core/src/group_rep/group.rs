use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{c, C64, ONE};

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    identity: usize,
    names: Option<Vec<String>>,
}

/// Validates a multiplication table (`table[a][b] = a·b`).
pub fn validate_group(table: &[Vec<usize>]) -> Result<FiniteGroup> {
    let n = table.len();
    if n == 0 {
        return Err(Error::MalformedTable("empty table".into()));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::MalformedTable(format!("row {i} has length {}", row.len())));
        }
        if let Some(&bad) = row.iter().find(|&&x| x >= n) {
            return Err(Error::MalformedTable(format!("entry {bad} in row {i}")));
        }
    }
    let identity = (0..n).find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g)).ok_or(Error::NoIdentity)?;
    let inverse = (0..n)
        .map(|g| (0..n).find(|&h| table[g][h] == identity && table[h][g] == identity).ok_or(Error::MissingInverse(g)))
        .collect::<Result<Vec<_>>>()?;
    for a in 0..n {
        for b in 0..n {
            let ab = table[a][b];
            for cc in 0..n {
                if table[ab][cc] != table[a][table[b][cc]] {
                    return Err(Error::NonAssociative { a, b, c: cc });
                }
            }
        }
    }
    Ok(FiniteGroup { order: n, table: table.iter().flatten().copied().collect(), inverse, identity, names: None })
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn mult_table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn name(&self, g: usize) -> String {
        match &self.names {
            Some(n) => n[g].clone(),
            None => format!("g{g}"),
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.order {
            return Err(Error::MalformedTable(format!("{} names for {} elements", names.len(), self.order)));
        }
        self.names = Some(names);
        Ok(self)
    }

    /// Cyclic group `Z_n`, element `a` standing for `r^a`.
    pub fn cyclic(n: usize) -> Self {
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let names = (0..n).map(|a| format!("r^{a}")).collect();
        validate_group(&table).and_then(|g| g.with_names(names)).expect("cyclic table is a group")
    }

    /// Dihedral group of order `2n`; index `a + n·b` stands for `r^a s^b`.
    pub fn dihedral(n: usize) -> Self {
        let order = 2 * n;
        let table: Vec<Vec<usize>> = (0..order)
            .map(|x| {
                let (a, b) = (x % n, x / n);
                (0..order)
                    .map(|y| {
                        let (cc, d) = (y % n, y / n);
                        let rot = if b == 0 { (a + cc) % n } else { (a + n - cc) % n };
                        rot + n * ((b + d) % 2)
                    })
                    .collect()
            })
            .collect();
        let names = (0..order)
            .map(|x| {
                let (a, b) = (x % n, x / n);
                if b == 0 {
                    format!("r^{a}")
                } else {
                    format!("r^{a}s")
                }
            })
            .collect();
        validate_group(&table).and_then(|g| g.with_names(names)).expect("dihedral table is a group")
    }

    /// Quaternion group; index `u + 4·s` stands for `(−1)^s · u` with
    /// `u ∈ {1, i, j, k}`.
    pub fn quaternion() -> Self {
        // unit products: (unit, sign) for u·v
        const UNIT: [[(usize, usize); 4]; 4] = [
            [(0, 0), (1, 0), (2, 0), (3, 0)],
            [(1, 0), (0, 1), (3, 0), (2, 1)],
            [(2, 0), (3, 1), (0, 1), (1, 0)],
            [(3, 0), (2, 0), (1, 1), (0, 1)],
        ];
        let table: Vec<Vec<usize>> = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (u, v) = (x % 4, y % 4);
                        let (w, s) = UNIT[u][v];
                        w + 4 * ((s + x / 4 + y / 4) % 2)
                    })
                    .collect()
            })
            .collect();
        let units = ["1", "i", "j", "k"];
        let names = (0..8)
            .map(|x| {
                let sign = if x / 4 == 0 { "" } else { "-" };
                format!("{sign}{}", units[x % 4])
            })
            .collect();
        validate_group(&table).and_then(|g| g.with_names(names)).expect("quaternion table is a group")
    }

    /// Direct product; index `g + |G|·h`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Self {
        let (n, m) = (self.order, other.order);
        let table: Vec<Vec<usize>> = (0..n * m)
            .map(|x| (0..n * m).map(|y| self.mul(x % n, y % n) + n * other.mul(x / n, y / n)).collect())
            .collect();
        validate_group(&table).expect("direct product of groups is a group")
    }
}

/// A 2-cocycle `γ(g,h)` with values of unit modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct Multiplier {
    order: usize,
    values: Vec<C64>,
}

impl Multiplier {
    pub fn trivial(order: usize) -> Self {
        Multiplier { order, values: alloc::vec![ONE; order * order] }
    }

    /// Wraps raw values after checking unit modulus, normalisation and the
    /// cocycle condition.
    pub fn new(group: &FiniteGroup, values: Vec<C64>, tol: f64) -> Result<Self> {
        let n = group.order();
        if values.len() != n * n {
            return Err(Error::BadMultiplier(format!("{} values for order {n}", values.len())));
        }
        let m = Multiplier { order: n, values };
        m.validate(group, tol)?;
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, g: usize, h: usize) -> C64 {
        self.values[g * self.order + h]
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn validate(&self, group: &FiniteGroup, tol: f64) -> Result<()> {
        let n = group.order();
        let e = group.identity();
        for (k, v) in self.values.iter().enumerate() {
            if (v.norm() - 1.0).abs() > tol {
                return Err(Error::BadMultiplier(format!("γ({}, {}) has modulus {}", k / n, k % n, v.norm())));
            }
        }
        for g in 0..n {
            if (self.get(g, e) - ONE).norm() > tol || (self.get(e, g) - ONE).norm() > tol {
                return Err(Error::BadMultiplier(format!("γ is not normalised at {g}")));
            }
        }
        for g in 0..n {
            for h in 0..n {
                let gh = group.mul(g, h);
                for f in 0..n {
                    let lhs = self.get(g, h) * self.get(gh, f);
                    let rhs = self.get(g, group.mul(h, f)) * self.get(h, f);
                    if (lhs - rhs).norm() > tol {
                        return Err(Error::BadMultiplier(format!("cocycle condition fails at ({g}, {h}, {f})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_trivial(&self, tol: f64) -> bool {
        self.values.iter().all(|v| (v - ONE).norm() <= tol)
    }

    pub fn inverse(&self) -> Self {
        Multiplier { order: self.order, values: self.values.iter().map(|v| v.conj()).collect() }
    }

    pub fn product(&self, other: &Multiplier) -> Self {
        Multiplier { order: self.order, values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect() }
    }

    pub fn approx_eq(&self, other: &Multiplier, tol: f64) -> bool {
        self.order == other.order && self.values.iter().zip(&other.values).all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Multiplier changed by the coboundary of `mu`:
    /// `γ'(g,h) = γ(g,h) μ(g) μ(h) / μ(gh)`.
    pub fn twisted(&self, group: &FiniteGroup, mu: &[C64]) -> Self {
        let n = self.order;
        let values = (0..n * n)
            .map(|k| {
                let (g, h) = (k / n, k % n);
                self.values[k] * mu[g] * mu[h] / mu[group.mul(g, h)]
            })
            .collect();
        Multiplier { order: n, values }
    }

    pub(crate) fn from_raw(order: usize, values: Vec<C64>) -> Self {
        Multiplier { order, values }
    }
}

pub(crate) fn unit(theta: f64) -> C64 {
    c(0.0, theta).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn z2_is_a_group() {
        let g = validate_group(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn monoid_without_inverse_is_rejected() {
        // 0 is a two-sided identity here, so the failure is the missing inverse of 1
        assert_eq!(validate_group(&[vec![0, 1], vec![1, 1]]), Err(Error::MissingInverse(1)));
    }

    #[test]
    fn table_without_identity_is_rejected() {
        assert_eq!(validate_group(&[vec![1, 1], vec![1, 0]]), Err(Error::NoIdentity));
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // Latin square with identity 0 but (1·1)·2 != 1·(1·2)
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(validate_group(&t), Err(Error::NonAssociative { .. })));
    }

    #[test]
    fn malformed_tables_are_rejected() {
        assert!(matches!(validate_group(&[vec![0, 1]]), Err(Error::MalformedTable(_))));
        assert!(matches!(validate_group(&[vec![0, 2], vec![1, 0]]), Err(Error::MalformedTable(_))));
    }

    #[test]
    fn d10_relations() {
        let g = FiniteGroup::dihedral(5);
        assert_eq!(g.order(), 10);
        let (r, s) = (1, 5);
        let mut x = g.identity();
        for _ in 0..5 {
            x = g.mul(x, r);
        }
        assert_eq!(x, g.identity());
        assert_eq!(g.mul(s, s), g.identity());
        let sr = g.mul(s, r);
        assert_eq!(g.mul(sr, sr), g.identity());
    }

    #[test]
    fn quaternion_relations() {
        let q = FiniteGroup::quaternion();
        let (i, j, k, minus_one) = (1, 2, 3, 4);
        assert_eq!(q.mul(i, i), minus_one);
        assert_eq!(q.mul(i, j), k);
        assert_eq!(q.mul(j, i), k + 4);
        assert_eq!(q.mul(q.mul(i, j), k), minus_one);
    }

    #[test]
    fn trivial_multiplier_is_a_cocycle() {
        let g = FiniteGroup::dihedral(3);
        Multiplier::trivial(6).validate(&g, 1e-12).unwrap();
    }
}
