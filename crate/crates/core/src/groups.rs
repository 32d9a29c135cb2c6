//! Finite abelian groups in invariant-factor form, their characters, homomorphisms
//! and group algebras.

use crate::scalars::{CycScalar, Field};
use crate::smith::smith_normal_form;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("element or character {0} does not belong to {1}")]
    GroupMismatch(String, String),
    #[error("cannot parse group description {0:?}")]
    Parse(String),
    #[error("invariant factors {0:?} are not of the form n1 | n2 | ...")]
    NotInvariantForm(Vec<u64>),
    #[error("generator images do not define a homomorphism")]
    NotAHomomorphism,
}

/// Z/n1 x ... x Z/nr with every n_i >= 2 and n_i | n_(i+1).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    invariants: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(pub Vec<u64>);

/// chi(g) = prod zeta_(n_i)^(e_i g_i).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character(pub Vec<u64>);

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "char:({})", parts.join(","))
    }
}

impl fmt::Display for GroupAlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(g, c)| format!("({})*g{}", c, g)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariants.is_empty() {
            return write!(f, "Z/1");
        }
        let parts: Vec<String> = self.invariants.iter().map(|n| format!("Z/{}", n)).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Change of coordinates from a cyclic-product presentation to invariant-factor form.
#[derive(Clone, Debug)]
pub struct Normalization {
    input: Vec<u64>,
    /// new coordinates = u * old coordinates (rows restricted to nontrivial factors)
    u: Vec<Vec<i128>>,
    u_inv: Vec<Vec<i128>>,
    kept: Vec<usize>,
    pub group: AbelianGroup,
}

impl Normalization {
    pub fn is_identity(&self) -> bool {
        self.input == self.group.invariants
    }

    pub fn element(&self, coords: &[i64]) -> Result<GroupElement, GroupError> {
        if coords.len() != self.input.len() {
            return Err(GroupError::GroupMismatch(format!("{:?}", coords), self.group.to_string()));
        }
        let out = self
            .kept
            .iter()
            .zip(&self.group.invariants)
            .map(|(&r, &n)| {
                let s: i128 = self.u[r].iter().zip(coords).map(|(a, &x)| a * x as i128).sum();
                s.rem_euclid(n as i128) as u64
            })
            .collect();
        Ok(GroupElement(out))
    }

    pub fn character(&self, coords: &[i64]) -> Result<Character, GroupError> {
        if coords.len() != self.input.len() {
            return Err(GroupError::GroupMismatch(format!("{:?}", coords), self.group.to_string()));
        }
        // chi(y) = exp(2 pi i sum_i e_i/n_i (u_inv y)_i); new exponent f_j = d_j * sum_i e_i u_inv[i][j] / n_i.
        let l: i128 = self.input.iter().fold(1i128, |acc, &n| lcm(acc, n as i128));
        let mut out = Vec::new();
        for (&j, &d) in self.kept.iter().zip(&self.group.invariants) {
            let mut num: i128 = 0;
            for (i, &n) in self.input.iter().enumerate() {
                num += coords[i] as i128 * self.u_inv[i][j] * (l / n as i128);
            }
            // f_j = d * num / l must be an integer modulo d.
            let f = num * d as i128;
            if f % l != 0 {
                return Err(GroupError::GroupMismatch(format!("char {:?}", coords), self.group.to_string()));
            }
            out.push((f / l).rem_euclid(d as i128) as u64);
        }
        Ok(Character(out))
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn lcm(a: i128, b: i128) -> i128 {
    a / gcd(a, b) * b
}

impl AbelianGroup {
    pub fn new(invariants: Vec<u64>) -> Result<Self, GroupError> {
        let ok = invariants.iter().all(|&n| n >= 2) && invariants.windows(2).all(|w| w[1] % w[0] == 0);
        if !ok {
            return Err(GroupError::NotInvariantForm(invariants));
        }
        Ok(AbelianGroup { invariants })
    }

    /// Normalizes an arbitrary product of cyclic groups via Smith normal form.
    pub fn from_cyclic_factors(ns: &[u64]) -> Result<Normalization, GroupError> {
        if ns.iter().any(|&n| n == 0) {
            return Err(GroupError::Parse(format!("{:?}", ns)));
        }
        let k = ns.len();
        let a: Vec<Vec<i128>> = (0..k)
            .map(|i| (0..k).map(|j| if i == j { ns[i] as i128 } else { 0 }).collect())
            .collect();
        let snf = smith_normal_form(&a, k, k);
        let diag = snf.diagonal();
        let kept: Vec<usize> = (0..k).filter(|&i| diag[i] > 1).collect();
        let invariants: Vec<u64> = kept.iter().map(|&i| diag[i] as u64).collect();
        let group = AbelianGroup::new(invariants)?;
        // Z^k / D Z^k -> Z^k / S Z^k via x -> U x, since U D V = S.
        Ok(Normalization {
            input: ns.to_vec(),
            u: snf.u,
            u_inv: snf.u_inv,
            kept,
            group,
        })
    }

    /// Parses "Z/n1 x Z/n2 x ...".
    pub fn parse(s: &str) -> Result<Normalization, GroupError> {
        let err = || GroupError::Parse(s.to_string());
        let mut ns = Vec::new();
        for part in s.split(['x', '*', '×']) {
            let p = part.trim();
            let n = p.strip_prefix("Z/").ok_or_else(err)?;
            ns.push(n.trim().parse::<u64>().map_err(|_| err())?);
        }
        let mut norm = Self::from_cyclic_factors(&ns)?;
        // Z/1 factors contribute nothing.
        if ns.iter().all(|&n| n == 1) {
            norm.group = AbelianGroup { invariants: vec![] };
        }
        Ok(norm)
    }

    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.invariants.last().copied().unwrap_or(1)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    pub fn trivial_character(&self) -> Character {
        Character(vec![0; self.rank()])
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.0.len() == self.rank() && g.0.iter().zip(&self.invariants).all(|(x, n)| x < n)
    }

    pub fn contains_char(&self, c: &Character) -> bool {
        c.0.len() == self.rank() && c.0.iter().zip(&self.invariants).all(|(x, n)| x < n)
    }

    pub fn check(&self, g: &GroupElement) -> Result<(), GroupError> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(GroupError::GroupMismatch(g.to_string(), self.to_string()))
        }
    }

    pub fn check_char(&self, c: &Character) -> Result<(), GroupError> {
        if self.contains_char(c) {
            Ok(())
        } else {
            Err(GroupError::GroupMismatch(c.to_string(), self.to_string()))
        }
    }

    pub fn element_from(&self, coords: &[i64]) -> GroupElement {
        GroupElement(
            coords
                .iter()
                .zip(&self.invariants)
                .map(|(&x, &n)| x.rem_euclid(n as i64) as u64)
                .collect(),
        )
    }

    pub fn char_from(&self, coords: &[i64]) -> Character {
        Character(self.element_from(coords).0)
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.invariants)
                .map(|((x, y), n)| (x + y) % n)
                .collect(),
        )
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        GroupElement(a.0.iter().zip(&self.invariants).map(|(x, n)| (n - x) % n).collect())
    }

    pub fn pow(&self, a: &GroupElement, e: i64) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.invariants)
                .map(|(&x, &n)| ((x as i128 * e as i128).rem_euclid(n as i128)) as u64)
                .collect(),
        )
    }

    pub fn is_identity(&self, a: &GroupElement) -> bool {
        a.0.iter().all(|&x| x == 0)
    }

    pub fn element_order(&self, a: &GroupElement) -> u64 {
        a.0.iter().zip(&self.invariants).fold(1u64, |acc, (&x, &n)| {
            let o = n / gcd(x as i128, n as i128) as u64;
            (lcm(acc as i128, o as i128)) as u64
        })
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> Vec<GroupElement> {
        let mut out = vec![GroupElement(vec![])];
        for &n in &self.invariants {
            let mut next = Vec::with_capacity(out.len() * n as usize);
            for g in &out {
                for x in 0..n {
                    let mut v = g.0.clone();
                    v.push(x);
                    next.push(GroupElement(v));
                }
            }
            out = next;
        }
        out
    }

    pub fn characters(&self) -> Vec<Character> {
        self.elements().into_iter().map(|g| Character(g.0)).collect()
    }

    /// k with chi(g) = zeta_e^k, e the exponent of the group.
    pub fn char_eval_exp(&self, chi: &Character, g: &GroupElement) -> u64 {
        let e = self.exponent();
        let mut s: u128 = 0;
        for ((c, x), n) in chi.0.iter().zip(&g.0).zip(&self.invariants) {
            s += (*c as u128 * *x as u128 % *n as u128) * (e / n) as u128;
        }
        (s % e as u128) as u64
    }

    /// chi(g) as an element of `field`, whose order must be a multiple of the exponent.
    pub fn char_eval(&self, chi: &Character, g: &GroupElement, field: &Field) -> CycScalar {
        let e = self.exponent();
        let m = field.order();
        assert!(m % e == 0, "field Q(zeta_{}) too small for exponent {}", m, e);
        field.zeta_pow((self.char_eval_exp(chi, g) * (m / e)) as i64)
    }

    pub fn char_mul(&self, a: &Character, b: &Character) -> Character {
        Character(self.mul(&GroupElement(a.0.clone()), &GroupElement(b.0.clone())).0)
    }

    pub fn char_inv(&self, a: &Character) -> Character {
        Character(self.inv(&GroupElement(a.0.clone())).0)
    }

    pub fn char_pow(&self, a: &Character, e: i64) -> Character {
        Character(self.pow(&GroupElement(a.0.clone()), e).0)
    }

    pub fn char_is_trivial(&self, a: &Character) -> bool {
        a.0.iter().all(|&x| x == 0)
    }

    pub fn char_order(&self, a: &Character) -> u64 {
        self.element_order(&GroupElement(a.0.clone()))
    }

    pub fn parse_element(&self, s: &str) -> Result<GroupElement, GroupError> {
        let coords = parse_tuple(s).ok_or_else(|| GroupError::Parse(s.to_string()))?;
        let g = GroupElement(coords);
        self.check(&g)?;
        Ok(g)
    }

    pub fn parse_character(&self, s: &str) -> Result<Character, GroupError> {
        let t = s.trim();
        let t = t.strip_prefix("char:").unwrap_or(t);
        let coords = parse_tuple(t).ok_or_else(|| GroupError::Parse(s.to_string()))?;
        let c = Character(coords);
        self.check_char(&c)?;
        Ok(c)
    }
}

fn parse_tuple(s: &str) -> Option<Vec<u64>> {
    let t = s.trim().trim_start_matches('(').trim_end_matches(')');
    if t.trim().is_empty() {
        return Some(vec![]);
    }
    t.split(',').map(|x| x.trim().parse::<u64>().ok()).collect()
}

/// A homomorphism given by the images of the invariant-factor generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupHom {
    pub images: Vec<GroupElement>,
}

impl GroupHom {
    pub fn new(src: &AbelianGroup, dst: &AbelianGroup, images: Vec<GroupElement>) -> Result<Self, GroupError> {
        if images.len() != src.rank() {
            return Err(GroupError::NotAHomomorphism);
        }
        for (img, &n) in images.iter().zip(src.invariants()) {
            dst.check(img)?;
            if !dst.is_identity(&dst.pow(img, n as i64)) {
                return Err(GroupError::NotAHomomorphism);
            }
        }
        Ok(GroupHom { images })
    }

    pub fn identity(g: &AbelianGroup) -> Self {
        let images = (0..g.rank())
            .map(|i| {
                let mut v = vec![0; g.rank()];
                v[i] = 1;
                GroupElement(v)
            })
            .collect();
        GroupHom { images }
    }

    pub fn apply(&self, dst: &AbelianGroup, g: &GroupElement) -> GroupElement {
        let mut acc = dst.identity();
        for (x, img) in g.0.iter().zip(&self.images) {
            acc = dst.mul(&acc, &dst.pow(img, *x as i64));
        }
        acc
    }

    /// chi o phi as a character of the source group.
    pub fn pull_back(&self, src: &AbelianGroup, dst: &AbelianGroup, chi: &Character) -> Character {
        let e = dst.exponent() as u128;
        let out = self
            .images
            .iter()
            .zip(src.invariants())
            .map(|(img, &n)| {
                // chi(img) = zeta_e^v must equal zeta_n^f.
                let v = dst.char_eval_exp(chi, img) as u128;
                let f = v * n as u128;
                debug_assert!(f % e == 0);
                ((f / e) % n as u128) as u64
            })
            .collect();
        Character(out)
    }

    pub fn is_bijective(&self, src: &AbelianGroup, dst: &AbelianGroup) -> bool {
        if src.order() != dst.order() {
            return false;
        }
        let image: HashSet<GroupElement> = src.elements().iter().map(|g| self.apply(dst, g)).collect();
        image.len() as u64 == dst.order()
    }

    pub fn inverse(&self, src: &AbelianGroup, dst: &AbelianGroup) -> Option<GroupHom> {
        if !self.is_bijective(src, dst) {
            return None;
        }
        let table: BTreeMap<GroupElement, GroupElement> =
            src.elements().into_iter().map(|g| (self.apply(dst, &g), g)).collect();
        let images = GroupHom::identity(dst)
            .images
            .iter()
            .map(|e| table[e].clone())
            .collect();
        Some(GroupHom { images })
    }
}

/// All isomorphisms src -> dst.
pub fn enumerate_isomorphisms(src: &AbelianGroup, dst: &AbelianGroup) -> Vec<GroupHom> {
    if src.invariants() != dst.invariants() {
        return vec![];
    }
    let elements = dst.elements();
    let mut out = Vec::new();
    let mut chosen: Vec<GroupElement> = Vec::new();
    let start: HashSet<GroupElement> = [dst.identity()].into_iter().collect();
    extend_isos(src, dst, &elements, &mut chosen, &start, &mut out);
    out
}

fn extend_isos(
    src: &AbelianGroup,
    dst: &AbelianGroup,
    elements: &[GroupElement],
    chosen: &mut Vec<GroupElement>,
    span: &HashSet<GroupElement>,
    out: &mut Vec<GroupHom>,
) {
    let k = chosen.len();
    if k == src.rank() {
        out.push(GroupHom { images: chosen.clone() });
        return;
    }
    let n = src.invariants()[k];
    for y in elements {
        if dst.element_order(y) != n {
            continue;
        }
        // The new generator must meet the current subgroup trivially.
        let mut next = HashSet::with_capacity(span.len() * n as usize);
        let mut power = dst.identity();
        for _ in 0..n {
            for h in span {
                next.insert(dst.mul(h, &power));
            }
            power = dst.mul(&power, y);
        }
        if next.len() != span.len() * n as usize {
            continue;
        }
        chosen.push(y.clone());
        extend_isos(src, dst, elements, chosen, &next, out);
        chosen.pop();
    }
}

/// Finitely supported element of the group algebra k[Gamma]; no explicit zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgElem {
    pub terms: BTreeMap<GroupElement, CycScalar>,
}

impl GroupAlgElem {
    pub fn zero() -> Self {
        GroupAlgElem { terms: BTreeMap::new() }
    }

    pub fn from_element(g: GroupElement, field: &Field) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(g, field.one());
        GroupAlgElem { terms }
    }

    pub fn scalar(c: CycScalar, group: &AbelianGroup) -> Self {
        let mut e = GroupAlgElem::zero();
        e.add_term(group.identity(), c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, g: GroupElement, c: CycScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&g) {
            Some(x) => {
                *x += &c;
                if x.is_zero() {
                    self.terms.remove(&g);
                }
            }
            None => {
                self.terms.insert(g, c);
            }
        }
    }

    pub fn add(&self, other: &GroupAlgElem) -> GroupAlgElem {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &GroupAlgElem) -> GroupAlgElem {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &CycScalar) -> GroupAlgElem {
        let mut out = GroupAlgElem::zero();
        if c.is_zero() {
            return out;
        }
        for (g, x) in &self.terms {
            out.add_term(g.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &GroupAlgElem, group: &AbelianGroup) -> GroupAlgElem {
        let mut out = GroupAlgElem::zero();
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                out.add_term(group.mul(g, h), a * b);
            }
        }
        out
    }

    pub fn pow(&self, e: u64, group: &AbelianGroup, field: &Field) -> GroupAlgElem {
        let mut acc = GroupAlgElem::from_element(group.identity(), field);
        for _ in 0..e {
            acc = acc.mul(self, group);
        }
        acc
    }

    /// Counit: sum of coefficients.
    pub fn counit(&self, field: &Field) -> CycScalar {
        let mut s = field.zero();
        for c in self.terms.values() {
            s += c;
        }
        s
    }

    pub fn coeff(&self, g: &GroupElement) -> Option<&CycScalar> {
        self.terms.get(g)
    }

    pub fn map_hom(&self, phi: &GroupHom, dst: &AbelianGroup) -> GroupAlgElem {
        let mut out = GroupAlgElem::zero();
        for (g, c) in &self.terms {
            out.add_term(phi.apply(dst, g), c.clone());
        }
        out
    }

    /// Re-expresses the coefficients in a larger cyclotomic field.
    pub fn embed(&self, field: &Field) -> GroupAlgElem {
        let mut out = GroupAlgElem::zero();
        for (g, c) in &self.terms {
            out.add_term(g.clone(), field.embed(c).expect("embedding into a larger field"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::CyclotomicField;

    #[test]
    fn normalization_of_cyclic_products() {
        let n = AbelianGroup::parse("Z/11 x Z/13").unwrap();
        assert_eq!(n.group.invariants(), &[143]);
        assert!(!n.is_identity());
        let g = n.element(&[1, 1]).unwrap();
        assert_eq!(n.group.element_order(&g), 143);
        let n = AbelianGroup::parse("Z/2 x Z/4").unwrap();
        assert_eq!(n.group.invariants(), &[2, 4]);
        assert!(n.is_identity());
        assert!(AbelianGroup::new(vec![4, 2]).is_err());
    }

    #[test]
    fn characters_survive_normalization() {
        let n = AbelianGroup::parse("Z/3 x Z/2").unwrap();
        let f = CyclotomicField::new(6);
        let old = [(0i64, 0i64), (1, 0), (2, 1), (1, 1), (0, 1)];
        let chis = [[1i64, 0], [0, 1], [2, 1]];
        for chi in chis {
            let c = n.character(&chi).unwrap();
            for &(a, b) in &old {
                let g = n.element(&[a, b]).unwrap();
                let expected = f.zeta_pow(2 * chi[0] * a + 3 * chi[1] * b);
                assert_eq!(n.group.char_eval(&c, &g, &f), expected);
            }
        }
    }

    #[test]
    fn automorphism_counts() {
        let z11 = AbelianGroup::new(vec![11]).unwrap();
        assert_eq!(enumerate_isomorphisms(&z11, &z11).len(), 10);
        let v4 = AbelianGroup::new(vec![2, 2]).unwrap();
        assert_eq!(enumerate_isomorphisms(&v4, &v4).len(), 6);
        let z4 = AbelianGroup::new(vec![4]).unwrap();
        assert!(enumerate_isomorphisms(&v4, &z4).is_empty());
        let z2z4 = AbelianGroup::new(vec![2, 4]).unwrap();
        assert_eq!(enumerate_isomorphisms(&z2z4, &z2z4).len(), 8);
    }

    #[test]
    fn pull_back_matches_evaluation() {
        let g = AbelianGroup::new(vec![3, 9]).unwrap();
        let f = CyclotomicField::new(9);
        for phi in enumerate_isomorphisms(&g, &g).into_iter().take(20) {
            let chi = Character(vec![2, 5]);
            let pulled = phi.pull_back(&g, &g, &chi);
            for x in g.elements() {
                assert_eq!(g.char_eval(&pulled, &x, &f), g.char_eval(&chi, &phi.apply(&g, &x), &f));
            }
            let inv = phi.inverse(&g, &g).unwrap();
            for x in g.elements() {
                assert_eq!(inv.apply(&g, &phi.apply(&g, &x)), x);
            }
        }
    }
}
