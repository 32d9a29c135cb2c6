//! The tensor algebra T(V) of a diagonal braided vector space, braided commutators,
//! Serre elements, root vectors, the braided coproduct and cocycle twisting.

use crate::scalars::{CycScalar, Field};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidedError {
    #[error("operands belong to different braided vector spaces")]
    AmbientMismatch,
    #[error("braidings are not twist-equivalent: {0}")]
    BraidingMismatch(String),
    #[error("{0:?} has no decomposition into earlier and later roots")]
    NoRootDecomposition(Vec<i64>),
}

/// Diagonal braiding c(x_i ⊗ x_j) = q_ij x_j ⊗ x_i with q_ij = zeta_m^(exps[i][j]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Braiding {
    pub field: Field,
    pub exps: Vec<Vec<u64>>,
}

impl Braiding {
    pub fn new(field: Field, exps: Vec<Vec<u64>>) -> Self {
        let m = field.order();
        let exps = exps.into_iter().map(|r| r.into_iter().map(|e| e % m).collect()).collect();
        Braiding { field, exps }
    }

    pub fn theta(&self) -> usize {
        self.exps.len()
    }

    pub fn q(&self, i: usize, j: usize) -> CycScalar {
        self.field.zeta_pow(self.exps[i][j] as i64)
    }

    pub fn bichar_exp(&self, alpha: &[i64], beta: &[i64]) -> u64 {
        let m = self.field.order() as i128;
        let mut s: i128 = 0;
        for (i, &a) in alpha.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in beta.iter().enumerate() {
                if b != 0 {
                    s += a as i128 * b as i128 * self.exps[i][j] as i128;
                }
            }
        }
        s.rem_euclid(m) as u64
    }

    /// q on Z^theta x Z^theta extended bimultiplicatively.
    pub fn bichar(&self, alpha: &[i64], beta: &[i64]) -> CycScalar {
        self.field.zeta_pow(self.bichar_exp(alpha, beta) as i64)
    }

    pub fn word_degree(&self, w: &[u8]) -> Vec<i64> {
        let mut d = vec![0; self.theta()];
        for &x in w {
            d[x as usize] += 1;
        }
        d
    }
}

pub type Word = Vec<u8>;

/// Element of T(V): a finite linear combination of words, no explicit zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidedPoly {
    pub braiding: Arc<Braiding>,
    pub terms: BTreeMap<Word, CycScalar>,
}

impl BraidedPoly {
    pub fn zero(b: &Arc<Braiding>) -> Self {
        BraidedPoly {
            braiding: b.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(b: &Arc<Braiding>) -> Self {
        Self::word(b, vec![])
    }

    pub fn word(b: &Arc<Braiding>, w: Word) -> Self {
        let mut p = Self::zero(b);
        p.terms.insert(w, b.field.one());
        p
    }

    pub fn letter(b: &Arc<Braiding>, i: usize) -> Self {
        Self::word(b, vec![i as u8])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: CycScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(x) => {
                *x += &c;
                if x.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    fn same(&self, other: &BraidedPoly) -> Result<(), BraidedError> {
        if Arc::ptr_eq(&self.braiding, &other.braiding) || *self.braiding == *other.braiding {
            Ok(())
        } else {
            Err(BraidedError::AmbientMismatch)
        }
    }

    pub fn add(&self, other: &BraidedPoly) -> Result<BraidedPoly, BraidedError> {
        self.same(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &BraidedPoly) -> Result<BraidedPoly, BraidedError> {
        self.same(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &CycScalar) -> BraidedPoly {
        let mut out = BraidedPoly::zero(&self.braiding);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &BraidedPoly) -> Result<BraidedPoly, BraidedError> {
        self.same(other)?;
        let mut out = BraidedPoly::zero(&self.braiding);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, a * b);
            }
        }
        Ok(out)
    }

    /// Degree if all words share one degree.
    pub fn degree(&self) -> Option<Vec<i64>> {
        let mut it = self.terms.keys().map(|w| self.braiding.word_degree(w));
        let first = it.next()?;
        for d in it {
            if d != first {
                return None;
            }
        }
        Some(first)
    }

    /// Braided commutator [x, y]_c = sum over terms of uv - q(deg u, deg v) vu.
    pub fn braided_commutator(&self, other: &BraidedPoly) -> Result<BraidedPoly, BraidedError> {
        self.same(other)?;
        let b = &self.braiding;
        let mut out = BraidedPoly::zero(b);
        for (u, a) in &self.terms {
            let du = b.word_degree(u);
            for (v, c) in &other.terms {
                let dv = b.word_degree(v);
                let ac = a * c;
                let mut uv = u.clone();
                uv.extend_from_slice(v);
                out.add_term(uv, ac.clone());
                let mut vu = v.clone();
                vu.extend_from_slice(u);
                out.add_term(vu, -(ac * b.bichar(&du, &dv)));
            }
        }
        Ok(out)
    }

    /// ad_c(x_i)(y) = x_i y - q(alpha_i, deg y) y x_i.
    pub fn ad_c(&self, i: usize) -> BraidedPoly {
        BraidedPoly::letter(&self.braiding, i)
            .braided_commutator(self)
            .expect("same braiding")
    }

    /// Braided coproduct with Delta(x_i) = x_i ⊗ 1 + 1 ⊗ x_i.
    pub fn coproduct(&self) -> TensorPoly {
        let b = &self.braiding;
        let mut out = TensorPoly::zero(b);
        for (w, c) in &self.terms {
            let mut acc: BTreeMap<(Word, Word), CycScalar> = BTreeMap::new();
            acc.insert((vec![], vec![]), c.clone());
            for &x in w {
                let mut next: BTreeMap<(Word, Word), CycScalar> = BTreeMap::new();
                let ax = {
                    let mut e = vec![0; b.theta()];
                    e[x as usize] = 1;
                    e
                };
                for ((l, r), coef) in acc {
                    // (l ⊗ r)(x ⊗ 1) = q(deg r, alpha_x) lx ⊗ r
                    let f = b.bichar(&b.word_degree(&r), &ax);
                    let mut lx = l.clone();
                    lx.push(x);
                    add_tensor_term(&mut next, (lx, r.clone()), &coef * &f);
                    let mut rx = r;
                    rx.push(x);
                    add_tensor_term(&mut next, (l, rx), coef);
                }
                acc = next;
            }
            for (k, v) in acc {
                add_tensor_term(&mut out.terms, k, v);
            }
        }
        out
    }
}

fn add_tensor_term(map: &mut BTreeMap<(Word, Word), CycScalar>, k: (Word, Word), c: CycScalar) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&k) {
        Some(x) => {
            *x += &c;
            if x.is_zero() {
                map.remove(&k);
            }
        }
        None => {
            map.insert(k, c);
        }
    }
}

/// Element of T(V) ⊗ T(V).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorPoly {
    pub braiding: Arc<Braiding>,
    pub terms: BTreeMap<(Word, Word), CycScalar>,
}

impl TensorPoly {
    pub fn zero(b: &Arc<Braiding>) -> Self {
        TensorPoly {
            braiding: b.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, l: Word, r: Word, c: CycScalar) {
        add_tensor_term(&mut self.terms, (l, r), c);
    }

    /// Product in the braided tensor product algebra.
    pub fn mul(&self, other: &TensorPoly) -> TensorPoly {
        let b = &self.braiding;
        let mut out = TensorPoly::zero(b);
        for ((x, y), a) in &self.terms {
            let dy = b.word_degree(y);
            for ((x2, y2), c) in &other.terms {
                let f = b.bichar(&dy, &b.word_degree(x2));
                let mut l = x.clone();
                l.extend_from_slice(x2);
                let mut r = y.clone();
                r.extend_from_slice(y2);
                out.add_term(l, r, a * c * f);
            }
        }
        out
    }
}

/// Serre element ad_c(x_i)^(1 - a_ij)(x_j).
pub fn serre_element(b: &Arc<Braiding>, i: usize, j: usize, aij: i64) -> BraidedPoly {
    let mut y = BraidedPoly::letter(b, j);
    for _ in 0..(1 - aij) {
        y = y.ad_c(i);
    }
    y
}

/// Root vectors for roots given in convex order (local coordinates):
/// x_(beta_l) = [x_(beta_k), x_(beta_m)]_c for beta_k + beta_m = beta_l, k < l < m, k maximal.
pub fn root_vectors(b: &Arc<Braiding>, roots: &[Vec<i64>]) -> Result<Vec<BraidedPoly>, BraidedError> {
    let p = roots.len();
    let mut out: Vec<Option<BraidedPoly>> = vec![None; p];
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by_key(|&l| roots[l].iter().sum::<i64>());
    for l in order {
        let beta = &roots[l];
        if beta.iter().sum::<i64>() == 1 {
            let i = beta.iter().position(|&x| x == 1).unwrap();
            out[l] = Some(BraidedPoly::letter(b, i));
            continue;
        }
        let mut found = None;
        for k in (0..l).rev() {
            let rest: Vec<i64> = beta.iter().zip(&roots[k]).map(|(a, c)| a - c).collect();
            if let Some(m) = (l + 1..p).find(|&m| roots[m] == rest) {
                found = Some((k, m));
                break;
            }
        }
        let (k, m) = found.ok_or_else(|| BraidedError::NoRootDecomposition(beta.clone()))?;
        let xk = out[k].as_ref().expect("lower height root vector");
        let xm = out[m].as_ref().expect("lower height root vector");
        out[l] = Some(xk.braided_commutator(xm)?);
    }
    Ok(out.into_iter().map(|x| x.unwrap()).collect())
}

/// A bicharacter sigma on Z^theta given on simple roots as zeta_m^(exps[i][j]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle2 {
    pub field: Field,
    pub exps: Vec<Vec<u64>>,
}

impl Cocycle2 {
    pub fn eval_exp(&self, alpha: &[i64], beta: &[i64]) -> u64 {
        let m = self.field.order() as i128;
        let mut s: i128 = 0;
        for (i, &a) in alpha.iter().enumerate() {
            for (j, &c) in beta.iter().enumerate() {
                s += a as i128 * c as i128 * self.exps[i][j] as i128;
            }
        }
        s.rem_euclid(m) as u64
    }

    pub fn eval(&self, alpha: &[i64], beta: &[i64]) -> CycScalar {
        self.field.zeta_pow(self.eval_exp(alpha, beta) as i64)
    }

    pub fn inverse(&self) -> Cocycle2 {
        let m = self.field.order();
        Cocycle2 {
            field: self.field.clone(),
            exps: self.exps.iter().map(|r| r.iter().map(|&e| (m - e) % m).collect()).collect(),
        }
    }
}

/// sigma(alpha_i, alpha_j) = q_ij / q'_ij for i <= j and 1 for i > j.
pub fn twist_cocycle(q: &Braiding, q2: &Braiding) -> Result<Cocycle2, BraidedError> {
    if q.field.order() != q2.field.order() || q.theta() != q2.theta() {
        return Err(BraidedError::BraidingMismatch("different fields or ranks".into()));
    }
    let m = q.field.order();
    let n = q.theta();
    let mut exps = vec![vec![0u64; n]; n];
    for i in 0..n {
        if q.exps[i][i] != q2.exps[i][i] {
            return Err(BraidedError::BraidingMismatch(format!("q_{0}{0} differs", i + 1)));
        }
        for j in 0..n {
            if (q.exps[i][j] + q.exps[j][i]) % m != (q2.exps[i][j] + q2.exps[j][i]) % m {
                return Err(BraidedError::BraidingMismatch(format!("q_{0}{1} q_{1}{0} differs", i + 1, j + 1)));
            }
            if i <= j {
                exps[i][j] = (q.exps[i][j] + m - q2.exps[i][j]) % m;
            }
        }
    }
    Ok(Cocycle2 {
        field: q.field.clone(),
        exps,
    })
}

/// phi(x_(i1) ... x_(in)) = prod_(r<s) sigma(alpha_(ir), alpha_(is)) x'_(i1) ... x'_(in).
pub fn twist_map(x: &BraidedPoly, sigma: &Cocycle2, target: &Arc<Braiding>) -> Result<BraidedPoly, BraidedError> {
    if target.theta() != x.braiding.theta() || target.field.order() != sigma.field.order() {
        return Err(BraidedError::AmbientMismatch);
    }
    let m = sigma.field.order();
    let mut out = BraidedPoly::zero(target);
    for (w, c) in &x.terms {
        let mut e = 0u64;
        for s in 0..w.len() {
            for r in 0..s {
                e = (e + sigma.exps[w[r] as usize][w[s] as usize]) % m;
            }
        }
        out.add_term(w.clone(), c * &sigma.field.zeta_pow(e as i64));
    }
    Ok(out)
}

/// (phi ⊗ phi)(t) ↼ sigma: each l ⊗ r also picks up sigma(deg l, deg r).
pub fn twist_tensor(t: &TensorPoly, sigma: &Cocycle2, target: &Arc<Braiding>) -> Result<TensorPoly, BraidedError> {
    let mut out = TensorPoly::zero(target);
    for ((l, r), c) in &t.terms {
        let pl = twist_map(&BraidedPoly::word(&t.braiding, l.clone()), sigma, target)?;
        let pr = twist_map(&BraidedPoly::word(&t.braiding, r.clone()), sigma, target)?;
        let f = sigma.eval(&t.braiding.word_degree(l), &t.braiding.word_degree(r));
        let coef = c * &f * &pl.terms[l] * &pr.terms[r];
        out.add_term(l.clone(), r.clone(), coef);
    }
    Ok(out)
}

/// All words of length 1..=max_len in `theta` letters.
pub fn words_up_to(theta: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer: Vec<Word> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for x in 0..theta {
                let mut v = w.clone();
                v.push(x as u8);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Number of monomials or pairs on which each twisting identity was checked, and
/// whether it held everywhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistReport {
    pub cocycle: Cocycle2,
    pub checks: Vec<(String, usize, bool)>,
}

impl TwistReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.2)
    }
}

/// Checks phi(xy) = sigma phi(x) phi(y), Delta'(phi(z)) = (phi ⊗ phi)(Delta(z)) ↼ sigma,
/// phi([x, y]_c) = sigma [phi(x), phi(y)]_c' on monomials of degree <= max_degree,
/// and that the inverse twist undoes phi.
pub fn twist_report(q: &Arc<Braiding>, q2: &Arc<Braiding>, max_degree: usize) -> Result<TwistReport, BraidedError> {
    let sigma = twist_cocycle(q, q2)?;
    let inverse = twist_cocycle(q2, q)?;
    let words = words_up_to(q.theta(), max_degree);
    let phi = |w: &Word| twist_map(&BraidedPoly::word(q, w.clone()), &sigma, q2);
    let (mut n1, mut ok1, mut n3, mut ok3) = (0, true, 0, true);
    for x in &words {
        for y in &words {
            if x.len() + y.len() > max_degree {
                continue;
            }
            let f = sigma.eval(&q.word_degree(x), &q.word_degree(y));
            let (px, py) = (phi(x)?, phi(y)?);
            let mut xy = x.clone();
            xy.extend_from_slice(y);
            n1 += 1;
            ok1 &= phi(&xy)? == px.mul(&py)?.scale(&f);
            let comm = BraidedPoly::word(q, x.clone()).braided_commutator(&BraidedPoly::word(q, y.clone()))?;
            n3 += 1;
            ok3 &= twist_map(&comm, &sigma, q2)? == px.braided_commutator(&py)?.scale(&f);
        }
    }
    let (mut n2, mut ok2, mut n4, mut ok4) = (0, true, 0, true);
    for z in &words {
        let pz = phi(z)?;
        n2 += 1;
        ok2 &= pz.coproduct() == twist_tensor(&BraidedPoly::word(q, z.clone()).coproduct(), &sigma, q2)?;
        n4 += 1;
        ok4 &= twist_map(&pz, &inverse, q)? == BraidedPoly::word(q, z.clone());
    }
    Ok(TwistReport {
        cocycle: sigma,
        checks: vec![
            ("multiplicativity".into(), n1, ok1),
            ("comultiplicativity".into(), n2, ok2),
            ("braided commutators".into(), n3, ok3),
            ("round trip".into(), n4, ok4),
        ],
    })
}
