//! Data of finite Cartan type over a finite abelian group, together with linking
//! parameters (lambda) and root vector parameters (mu).

use crate::groups::{AbelianGroup, Character, GroupElement, GroupError};
use crate::roots::{CartanMatrix, CartanType, RootError, RootSystem};
use crate::scalars::{CycScalar, CyclotomicField, Field, ScalarError};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DatumError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("expected {expected} entries for {what}, got {got}")]
    RankMismatch { what: &'static str, expected: usize, got: usize },
    #[error("Cartan condition q_ij q_ji = q_ii^a_ij fails for (i, j) = ({0}, {1})")]
    CartanConditionFailed(usize, usize),
    #[error("q_ii = 1 for i = {0}")]
    UnitDiagonal(usize),
    #[error("q_ii has even order for i = {0}")]
    EvenOrder(usize),
    #[error("G2 component containing vertex {0} has order divisible by 3")]
    G2OrderDivisibleBy3(usize),
    #[error("q_ii orders differ inside the component containing vertex {0}")]
    NonConstantOrder(usize),
    #[error("linking parameter lambda_({0},{1}) must vanish")]
    IllegalLinking(usize, usize),
    #[error("root vector parameter mu for root {0:?} must vanish")]
    IllegalMu(Vec<i64>),
    #[error("{0:?} is not a positive root")]
    NotARoot(Vec<i64>),
    #[error("q_ii is not a power q^(2 d_i) of a common q in component {0}")]
    InconsistentSymmetrization(usize),
    #[error("Q(zeta_{0}) does not contain the values of the characters")]
    FieldTooSmall(u64),
}

/// D = (Gamma, (g_i), (chi_i), (a_ij)) with q_ij = chi_j(g_i).
#[derive(Clone, Debug)]
pub struct Datum {
    pub group: AbelianGroup,
    pub g: Vec<GroupElement>,
    pub chi: Vec<Character>,
    pub cartan: CartanMatrix,
    pub roots: RootSystem,
    pub field: Field,
    q_exp: Vec<Vec<u64>>,
    /// N_J for each component.
    pub orders: Vec<u64>,
}

impl PartialEq for Datum {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.g == other.g && self.chi == other.chi && self.cartan == other.cartan
    }
}

pub fn validate_datum(
    group: &AbelianGroup,
    g: &[GroupElement],
    chi: &[Character],
    cartan: &CartanMatrix,
) -> Result<Datum, DatumError> {
    let theta = cartan.len();
    for (what, got) in [("g", g.len()), ("chi", chi.len())] {
        if got != theta {
            return Err(DatumError::RankMismatch { what, expected: theta, got });
        }
    }
    for x in g {
        group.check(x)?;
    }
    for c in chi {
        group.check_char(c)?;
    }
    let m = group.exponent();
    let q_exp: Vec<Vec<u64>> = (0..theta)
        .map(|i| (0..theta).map(|j| group.char_eval_exp(&chi[j], &g[i])).collect())
        .collect();
    for i in 0..theta {
        if q_exp[i][i] == 0 {
            return Err(DatumError::UnitDiagonal(i + 1));
        }
    }
    for i in 0..theta {
        for j in 0..theta {
            if i == j {
                continue;
            }
            let lhs = (q_exp[i][j] + q_exp[j][i]) % m;
            let rhs = (q_exp[i][i] as i128 * cartan[i][j] as i128).rem_euclid(m as i128) as u64;
            if lhs != rhs {
                return Err(DatumError::CartanConditionFailed(i + 1, j + 1));
            }
        }
    }
    let roots = RootSystem::new(cartan)?;
    let ord = |k: u64| m / num_integer::gcd(k, m);
    for i in 0..theta {
        if ord(q_exp[i][i]) % 2 == 0 {
            return Err(DatumError::EvenOrder(i + 1));
        }
    }
    let mut orders = Vec::new();
    for comp in &roots.components {
        let n = ord(q_exp[comp.indices[0]][comp.indices[0]]);
        for &i in &comp.indices {
            if ord(q_exp[i][i]) != n {
                return Err(DatumError::NonConstantOrder(i + 1));
            }
        }
        if comp.ctype == CartanType::G2 && n % 3 == 0 {
            return Err(DatumError::G2OrderDivisibleBy3(comp.indices[0] + 1));
        }
        orders.push(n);
    }
    Ok(Datum {
        group: group.clone(),
        g: g.to_vec(),
        chi: chi.to_vec(),
        cartan: cartan.clone(),
        roots,
        field: CyclotomicField::new(m),
        q_exp,
        orders,
    })
}

impl Datum {
    pub fn theta(&self) -> usize {
        self.cartan.len()
    }

    pub fn modulus(&self) -> u64 {
        self.field.order()
    }

    /// modulus / exponent of Gamma: character values zeta_e^k are zeta_m^(k * scale).
    pub fn char_scale(&self) -> u64 {
        self.modulus() / self.group.exponent()
    }

    /// The same datum with scalars in Q(zeta_m) for a multiple m of the current modulus.
    pub fn with_field(&self, m: u64) -> Result<Datum, DatumError> {
        let old = self.modulus();
        if m % old != 0 {
            return Err(DatumError::FieldTooSmall(m));
        }
        let mut d = self.clone();
        let f = m / old;
        d.q_exp = self.q_exp.iter().map(|r| r.iter().map(|&e| e * f).collect()).collect();
        d.field = CyclotomicField::new(m);
        Ok(d)
    }

    /// k with q_ij = zeta_m^k (0-based indices).
    pub fn q_exp(&self, i: usize, j: usize) -> u64 {
        self.q_exp[i][j]
    }

    pub fn q(&self, i: usize, j: usize) -> CycScalar {
        self.field.zeta_pow(self.q_exp[i][j] as i64)
    }

    /// Exponent of the bicharacter q on degrees alpha, beta in Z^theta.
    pub fn q_bichar_exp(&self, alpha: &[i64], beta: &[i64]) -> u64 {
        let m = self.modulus() as i128;
        let mut s: i128 = 0;
        for (i, &a) in alpha.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in beta.iter().enumerate() {
                s += a as i128 * b as i128 * self.q_exp[i][j] as i128;
            }
        }
        s.rem_euclid(m) as u64
    }

    pub fn q_bichar(&self, alpha: &[i64], beta: &[i64]) -> CycScalar {
        self.field.zeta_pow(self.q_bichar_exp(alpha, beta) as i64)
    }

    pub fn g_alpha(&self, alpha: &[i64]) -> GroupElement {
        let mut acc = self.group.identity();
        for (i, &n) in alpha.iter().enumerate() {
            acc = self.group.mul(&acc, &self.group.pow(&self.g[i], n));
        }
        acc
    }

    pub fn chi_alpha(&self, alpha: &[i64]) -> Character {
        let mut acc = self.group.trivial_character();
        for (i, &n) in alpha.iter().enumerate() {
            acc = self.group.char_mul(&acc, &self.group.char_pow(&self.chi[i], n));
        }
        acc
    }

    /// N_J for the component containing root l (global index).
    pub fn root_order(&self, l: usize) -> u64 {
        self.orders[self.roots.root_component[l]]
    }

    pub fn vertex_order(&self, i: usize) -> u64 {
        self.orders[self.roots.component_of_vertex(i)]
    }

    pub fn same_component(&self, i: usize, j: usize) -> bool {
        self.roots.same_component(i, j)
    }

    /// i and j in different components, g_i g_j != 1 and chi_i chi_j = epsilon.
    pub fn linkable(&self, i: usize, j: usize) -> bool {
        !self.same_component(i, j)
            && !self.group.is_identity(&self.group.mul(&self.g[i], &self.g[j]))
            && self.group.char_is_trivial(&self.group.char_mul(&self.chi[i], &self.chi[j]))
    }

    /// Whether mu may be nonzero on root l: g_alpha^N != 1 and chi_alpha^N = epsilon.
    pub fn mu_allowed(&self, l: usize) -> bool {
        let alpha = &self.roots.roots[l];
        let n = self.root_order(l) as i64;
        !self.group.is_identity(&self.group.pow(&self.g_alpha(alpha), n))
            && self.group.char_is_trivial(&self.group.char_pow(&self.chi_alpha(alpha), n))
    }

    /// Warnings for hypotheses of the classification results that are not met.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (c, &n) in self.orders.iter().enumerate() {
            if n <= 7 {
                out.push(format!(
                    "component {} has q_ii of order {} <= 7; classification results assume order > 7",
                    c + 1,
                    n
                ));
            }
        }
        out
    }

    /// The braiding matrix over the full field Q(zeta_m).
    pub fn braiding(&self) -> crate::braided::Braiding {
        crate::braided::Braiding::new(self.field.clone(), self.q_exp.clone())
    }

    /// The braiding of component c restricted to its vertices, over the smallest
    /// cyclotomic field containing its entries.
    pub fn component_braiding(&self, c: usize, minimal_field: bool) -> crate::braided::Braiding {
        let idx = &self.roots.components[c].indices;
        let m = self.modulus();
        let sub: Vec<Vec<u64>> = idx.iter().map(|&i| idx.iter().map(|&j| self.q_exp[i][j]).collect()).collect();
        if !minimal_field {
            return crate::braided::Braiding::new(self.field.clone(), sub);
        }
        let mut mq = 1u64;
        for row in &sub {
            for &e in row {
                let o = m / num_integer::gcd(e, m);
                mq = num_integer::lcm(mq, o);
            }
        }
        let step = m / mq;
        let exps = sub.iter().map(|r| r.iter().map(|&e| e / step).collect()).collect();
        crate::braided::Braiding::new(CyclotomicField::new(mq), exps)
    }

    /// Per component: (h, q exponent in Q(zeta_m), symmetrizer) with q_ii = q^(2 d_i)
    /// and q of odd order.
    pub fn symmetrize(&self) -> Result<Vec<Symmetrization>, DatumError> {
        let m = self.modulus() as i128;
        let mut out = Vec::new();
        for (c, comp) in self.roots.components.iter().enumerate() {
            let d: Vec<i64> = comp.indices.iter().map(|&i| self.roots.symmetrizer[i]).collect();
            let hk = d.iter().position(|&x| x == 1).expect("a symmetrizer entry equals 1");
            let h = comp.indices[hk];
            let k = self.q_exp[h][h] as i128;
            let n = self.orders[c] as i128;
            // q_hh has odd order n, so q_hh^((n+1)/2) is its odd-order square root.
            let q = (k * ((n + 1) / 2)).rem_euclid(m);
            for (pos, &i) in comp.indices.iter().enumerate() {
                if (q * 2 * d[pos] as i128).rem_euclid(m) != self.q_exp[i][i] as i128 {
                    return Err(DatumError::InconsistentSymmetrization(c + 1));
                }
            }
            out.push(Symmetrization {
                component: c,
                h,
                q_exp: q as u64,
                d,
            });
        }
        Ok(out)
    }

    /// The symmetric braiding q'_ij = q^(d_i a_ij) sharing the Cartan data.
    pub fn symmetric_braiding(&self) -> Result<crate::braided::Braiding, DatumError> {
        let syms = self.symmetrize()?;
        let theta = self.theta();
        let m = self.modulus() as i128;
        let mut exps = vec![vec![0u64; theta]; theta];
        for s in &syms {
            let comp = &self.roots.components[s.component];
            for (a, &i) in comp.indices.iter().enumerate() {
                for &j in &comp.indices {
                    let e = s.q_exp as i128 * s.d[a] as i128 * self.cartan[i][j] as i128;
                    exps[i][j] = e.rem_euclid(m) as u64;
                }
            }
        }
        Ok(crate::braided::Braiding::new(self.field.clone(), exps))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symmetrization {
    pub component: usize,
    pub h: usize,
    pub q_exp: u64,
    pub d: Vec<i64>,
}

/// Linking parameters lambda_ij for i < j (0-based), sparse.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lambda(pub BTreeMap<(usize, usize), CycScalar>);

/// Root vector parameters mu_alpha keyed by global root index, sparse.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Mu(pub BTreeMap<usize, CycScalar>);

impl Lambda {
    pub fn get(&self, i: usize, j: usize) -> Option<&CycScalar> {
        self.0.get(&(i, j))
    }

    pub fn embed(&self, field: &Field) -> Result<Lambda, ScalarError> {
        let mut out = BTreeMap::new();
        for (k, c) in &self.0 {
            out.insert(*k, field.embed(c)?);
        }
        Ok(Lambda(out))
    }
}

impl Mu {
    pub fn get(&self, l: usize) -> Option<&CycScalar> {
        self.0.get(&l)
    }

    pub fn embed(&self, field: &Field) -> Result<Mu, ScalarError> {
        let mut out = BTreeMap::new();
        for (k, c) in &self.0 {
            out.insert(*k, field.embed(c)?);
        }
        Ok(Mu(out))
    }
}

pub fn validate_lambda(d: &Datum, lambda: &Lambda) -> Result<(), DatumError> {
    for (&(i, j), c) in &lambda.0 {
        if i >= j || j >= d.theta() {
            return Err(DatumError::IllegalLinking(i + 1, j + 1));
        }
        if c.field().order() != d.modulus() {
            return Err(DatumError::IllegalLinking(i + 1, j + 1));
        }
        if !c.is_zero() && !d.linkable(i, j) {
            return Err(DatumError::IllegalLinking(i + 1, j + 1));
        }
    }
    Ok(())
}

pub fn validate_mu(d: &Datum, mu: &Mu) -> Result<(), DatumError> {
    for (&l, c) in &mu.0 {
        let Some(alpha) = d.roots.roots.get(l) else {
            return Err(DatumError::NotARoot(vec![l as i64]));
        };
        if c.field().order() != d.modulus() || (!c.is_zero() && !d.mu_allowed(l)) {
            return Err(DatumError::IllegalMu(alpha.clone()));
        }
    }
    Ok(())
}

/// lambda on an ordered pair of vertices in different components, using
/// lambda_ji = -q_ji lambda_ij for i < j.
pub fn lambda_ext(d: &Datum, lambda: &Lambda, a: usize, b: usize) -> CycScalar {
    if a < b {
        lambda.get(a, b).cloned().unwrap_or_else(|| d.field.zero())
    } else {
        match lambda.get(b, a) {
            Some(c) => -(d.q(a, b) * c),
            None => d.field.zero(),
        }
    }
}

/// Lazily enumerates data of rank 1..=theta_max over a group, already in standard
/// block form. Tuples whose Cartan matrix is a non-standard relabelling are skipped,
/// since their standard relabelling is produced as its own tuple.
pub struct DataEnumerator {
    group: AbelianGroup,
    pairs: Vec<(GroupElement, Character, u64)>,
    theta_max: usize,
    theta: usize,
    odometer: Vec<usize>,
    started: bool,
}

pub fn enumerate_data(group: &AbelianGroup, theta_max: usize) -> DataEnumerator {
    let m = group.exponent();
    let mut pairs = Vec::new();
    for g in group.elements() {
        for chi in group.characters() {
            let k = group.char_eval_exp(&chi, &g);
            let ord = m / num_integer::gcd(k, m);
            if k != 0 && ord % 2 == 1 {
                pairs.push((g.clone(), chi, k));
            }
        }
    }
    DataEnumerator {
        group: group.clone(),
        pairs,
        theta_max,
        theta: 1,
        odometer: vec![0],
        started: false,
    }
}

impl DataEnumerator {
    fn advance(&mut self) -> bool {
        if !self.started {
            self.started = true;
            return !self.pairs.is_empty() && self.theta <= self.theta_max;
        }
        let p = self.pairs.len();
        for pos in (0..self.theta).rev() {
            self.odometer[pos] += 1;
            if self.odometer[pos] < p {
                return true;
            }
            self.odometer[pos] = 0;
        }
        self.theta += 1;
        self.odometer = vec![0; self.theta];
        self.theta <= self.theta_max
    }

    fn candidate(&self) -> Option<Datum> {
        let m = self.group.exponent();
        let theta = self.theta;
        let sel: Vec<&(GroupElement, Character, u64)> = self.odometer.iter().map(|&k| &self.pairs[k]).collect();
        let mut cartan = vec![vec![0i64; theta]; theta];
        for i in 0..theta {
            cartan[i][i] = 2;
            let qii = sel[i].2;
            let ord = m / num_integer::gcd(qii, m);
            for j in 0..theta {
                if i == j {
                    continue;
                }
                let qij = self.group.char_eval_exp(&sel[j].1, &sel[i].0);
                let qji = self.group.char_eval_exp(&sel[i].1, &sel[j].0);
                let lhs = (qij + qji) % m;
                let range = 3.min(ord as i64 - 1);
                let a = (0..=range).find(|&a| (qii as i128 * -a as i128).rem_euclid(m as i128) as u64 == lhs)?;
                cartan[i][j] = -a;
            }
        }
        let g: Vec<GroupElement> = sel.iter().map(|s| s.0.clone()).collect();
        let chi: Vec<Character> = sel.iter().map(|s| s.1.clone()).collect();
        validate_datum(&self.group, &g, &chi, &cartan).ok()
    }
}

impl Iterator for DataEnumerator {
    type Item = Datum;
    fn next(&mut self) -> Option<Datum> {
        while self.advance() {
            if let Some(d) = self.candidate() {
                return Some(d);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2_datum() -> Datum {
        let group = AbelianGroup::new(vec![11, 11]).unwrap();
        let g = vec![group.element_from(&[1, 0]), group.element_from(&[0, 1])];
        let chi = vec![group.char_from(&[2, -1]), group.char_from(&[-1, 2])];
        validate_datum(&group, &g, &chi, &vec![vec![2, -1], vec![-1, 2]]).unwrap()
    }

    #[test]
    fn a2_validates() {
        let d = a2_datum();
        assert_eq!(d.q_exp(0, 0), 2);
        assert_eq!(d.q_exp(0, 1), 10);
        assert_eq!(d.orders, vec![11]);
        assert!(d.warnings().is_empty());
    }

    #[test]
    fn rejects_bad_data() {
        let group = AbelianGroup::new(vec![11]).unwrap();
        let g = vec![group.element_from(&[1])];
        let err = validate_datum(&group, &g, &[group.char_from(&[0])], &vec![vec![2]]);
        assert_eq!(err.unwrap_err(), DatumError::UnitDiagonal(1));
        let z2 = AbelianGroup::new(vec![2]).unwrap();
        let err = validate_datum(&z2, &[z2.element_from(&[1])], &[z2.char_from(&[1])], &vec![vec![2]]);
        assert_eq!(err.unwrap_err(), DatumError::EvenOrder(1));
        let d = a2_datum();
        let err = validate_datum(&d.group, &d.g, &d.chi, &vec![vec![2, 0], vec![0, 2]]);
        assert_eq!(err.unwrap_err(), DatumError::CartanConditionFailed(1, 2));
    }

    #[test]
    fn g2_rejects_order_three_multiples() {
        // Over Z/9 every q_ii has order 3 or 9.
        let group = AbelianGroup::new(vec![9]).unwrap();
        let mut found = false;
        for d in enumerate_data(&group, 2) {
            if d.roots.components[0].ctype == CartanType::G2 {
                found = true;
            }
        }
        assert!(!found);
    }

    #[test]
    fn symmetrize_a1() {
        let group = AbelianGroup::new(vec![11]).unwrap();
        let d = validate_datum(&group, &[group.element_from(&[1])], &[group.char_from(&[1])], &vec![vec![2]]).unwrap();
        let s = d.symmetrize().unwrap();
        assert_eq!(s[0].q_exp, 6);
    }

    #[test]
    fn symmetrize_b2() {
        // Z/11 has no B2 datum; use Z/11 x Z/11 with q_11 = zeta, q_22 = zeta^2.
        let group = AbelianGroup::new(vec![11, 11]).unwrap();
        let g = [group.element_from(&[1, 0]), group.element_from(&[0, 1])];
        let chi = [group.char_from(&[1, 0]), group.char_from(&[9, 2])];
        let d = validate_datum(&group, &g, &chi, &CartanType::B(2).standard_matrix()).unwrap();
        let s = d.symmetrize().unwrap();
        assert_eq!(s[0].d, vec![1, 2]);
        let q = s[0].q_exp;
        let m = d.modulus();
        assert_eq!((2 * q) % m, d.q_exp(0, 0));
        assert_eq!((4 * q) % m, d.q_exp(1, 1));
    }

    #[test]
    fn enumeration_small() {
        let z11 = AbelianGroup::new(vec![11]).unwrap();
        assert_eq!(enumerate_data(&z11, 1).count(), 100);
        let z2 = AbelianGroup::new(vec![2]).unwrap();
        assert_eq!(enumerate_data(&z2, 1).count(), 0);
    }

    #[test]
    fn lambda_and_mu_admissibility() {
        let group = AbelianGroup::new(vec![11]).unwrap();
        let g = vec![group.element_from(&[1]), group.element_from(&[1])];
        let chi = vec![group.char_from(&[2]), group.char_from(&[-2])];
        let d = validate_datum(&group, &g, &chi, &vec![vec![2, 0], vec![0, 2]]).unwrap();
        assert!(d.linkable(0, 1));
        let mut lam = Lambda::default();
        lam.0.insert((0, 1), d.field.one());
        validate_lambda(&d, &lam).unwrap();
        // g^11 = 1 so mu must vanish.
        let mut mu = Mu::default();
        mu.0.insert(0, d.field.one());
        assert!(matches!(validate_mu(&d, &mu), Err(DatumError::IllegalMu(_))));
        let ext = lambda_ext(&d, &lam, 1, 0);
        assert_eq!(ext, -(d.q(1, 0)));
    }
}
