//! Normal forms in U(D, lambda) and in the finite-dimensional quotient
//! u(D, lambda, mu), with coproduct, counit, antipode and axiom checks.
//!
//! Basis elements are x_(beta_1)^(a_1) ... x_(beta_p)^(a_p) g with the roots of all
//! components in one global order (components in order, each in convex order).

use crate::braided::BraidedPoly;
use crate::datum::{lambda_ext, validate_lambda, validate_mu, Datum, DatumError, Lambda, Mu};
use crate::groups::{GroupAlgElem, GroupElement};
use crate::kalgebra::{KAlgebra, KError};
use crate::quotients::{default_degree_cap, Exps, PbwAlgebra, QuotientError};
use crate::scalars::{CycScalar, Field};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UError {
    #[error(transparent)]
    Datum(#[from] DatumError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    K(#[from] KError),
    #[error("u_alpha for root {0:?} is not central: a group element in its support acts nontrivially")]
    CentralityFailure(Vec<i64>),
    #[error("u_alpha for root {0:?} is nonzero although chi_alpha^N is nontrivial")]
    NonvanishingU(Vec<i64>),
    #[error("degree {degree} in component {component} exceeds the degree cap {cap}")]
    DegreeCapExceeded { component: usize, degree: u64, cap: u64 },
}

pub type Basis = (Exps, GroupElement);
/// Element of U or u in the PBW basis; no explicit zeros.
pub type UElem = BTreeMap<Basis, CycScalar>;
pub type UTensor = BTreeMap<(Basis, Basis), CycScalar>;

pub fn add_to<K: Ord>(m: &mut BTreeMap<K, CycScalar>, k: K, c: CycScalar) {
    if c.is_zero() {
        return;
    }
    match m.get_mut(&k) {
        Some(x) => {
            *x += &c;
            if x.is_zero() {
                m.remove(&k);
            }
        }
        None => {
            m.insert(k, c);
        }
    }
}

fn add_scaled<K: Ord + Clone>(acc: &mut BTreeMap<K, CycScalar>, x: &BTreeMap<K, CycScalar>, c: &CycScalar) {
    if c.is_zero() {
        return;
    }
    for (k, v) in x {
        add_to(acc, k.clone(), v * c);
    }
}

/// U(D, lambda) (untruncated) or u(D, lambda, mu) (truncated).
pub struct UAlgebra {
    pub datum: Datum,
    pub lambda: Lambda,
    pub mu: Mu,
    pub truncated: bool,
    pub field: Field,
    /// N_l per global root.
    pub bounds: Vec<u32>,
    /// u_(beta_l)(mu) per global root.
    pub u_root: Vec<GroupAlgElem>,
    pub degree_cap: u64,
    comps: Vec<Arc<PbwAlgebra>>,
    root_comp: Vec<usize>,
    root_local: Vec<usize>,
    simple_root: Vec<usize>,
    root_words: Vec<BraidedPoly>,
    mul_memo: RwLock<HashMap<(Exps, usize), Arc<UElem>>>,
    skew_memo: RwLock<HashMap<(Exps, usize), Arc<UElem>>>,
    delta_memo: Vec<OnceLock<Arc<UTensor>>>,
    delta_pow_memo: RwLock<HashMap<Exps, Arc<UTensor>>>,
    exps_memo: RwLock<HashMap<(Exps, Exps), Arc<UElem>>>,
    antipode_memo: Vec<OnceLock<Arc<UElem>>>,
}

impl UAlgebra {
    /// u(D, lambda, mu).
    pub fn build(d: &Datum, lambda: &Lambda, mu: &Mu) -> Result<Self, UError> {
        Self::construct(d, lambda, mu, true, None)
    }

    /// U(D, lambda), with multiplication limited to total degree `cap`.
    pub fn linked(d: &Datum, lambda: &Lambda, cap: Option<u64>) -> Result<Self, UError> {
        Self::construct(d, lambda, &Mu::default(), false, cap)
    }

    fn construct(d: &Datum, lambda: &Lambda, mu: &Mu, truncated: bool, cap: Option<u64>) -> Result<Self, UError> {
        validate_lambda(d, lambda)?;
        validate_mu(d, mu)?;
        let rs = &d.roots;
        let p = rs.roots.len();
        let mut comps = Vec::new();
        let mut root_comp = vec![0; p];
        let mut root_local = vec![0; p];
        let mut root_words = vec![None; p];
        let mut u_root = vec![GroupAlgElem::zero(); p];
        for (c, comp) in rs.components.iter().enumerate() {
            let sub: Vec<Vec<i64>> = comp
                .indices
                .iter()
                .map(|&i| comp.indices.iter().map(|&j| d.cartan[i][j]).collect())
                .collect();
            let braiding = Arc::new(d.component_braiding(c, false));
            let pbw = Arc::new(PbwAlgebra::new(braiding, &sub, Some(u64::MAX))?);
            let global_braiding = Arc::new(d.braiding());
            for (local, l) in rs.component_roots[c].clone().enumerate() {
                root_comp[l] = c;
                root_local[l] = local;
                let mut w = BraidedPoly::zero(&global_braiding);
                for (word, coef) in &pbw.root_vectors[local].terms {
                    let gw = word.iter().map(|&x| comp.indices[x as usize] as u8).collect();
                    w.add_term(gw, coef.clone());
                }
                root_words[l] = Some(w);
            }
            if truncated && rs.component_roots[c].clone().any(|l| mu.get(l).is_some_and(|x| !x.is_zero())) {
                let k = KAlgebra::new(d, c)?;
                let fam = k.build_ufamily(mu)?;
                for (local, l) in rs.component_roots[c].clone().enumerate() {
                    u_root[l] = fam.u_root(local, k.num_roots()).clone();
                }
            }
            comps.push(pbw);
        }
        // Hypotheses making u_alpha central and the quotient well defined.
        for l in 0..p {
            let alpha = &rs.roots[l];
            if u_root[l].is_zero() {
                continue;
            }
            for h in u_root[l].terms.keys() {
                for chi in &d.chi {
                    if d.group.char_eval_exp(chi, h) != 0 {
                        return Err(UError::CentralityFailure(alpha.clone()));
                    }
                }
            }
            let n = d.root_order(l) as i64;
            if !d.group.char_is_trivial(&d.group.char_pow(&d.chi_alpha(alpha), n)) {
                return Err(UError::NonvanishingU(alpha.clone()));
            }
        }
        let simple_root = (0..d.theta())
            .map(|i| {
                let mut e = vec![0; d.theta()];
                e[i] = 1;
                rs.root_index(&e).expect("simple root")
            })
            .collect();
        let bounds = (0..p).map(|l| d.root_order(l) as u32).collect();
        let max_n = d.orders.iter().copied().max().unwrap_or(1);
        Ok(UAlgebra {
            datum: d.clone(),
            lambda: lambda.clone(),
            mu: mu.clone(),
            truncated,
            field: d.field.clone(),
            bounds,
            u_root,
            degree_cap: cap.unwrap_or_else(|| default_degree_cap(max_n)),
            comps,
            root_comp,
            root_local,
            simple_root,
            root_words: root_words.into_iter().map(|x| x.unwrap()).collect(),
            mul_memo: RwLock::new(HashMap::new()),
            skew_memo: RwLock::new(HashMap::new()),
            delta_memo: (0..p).map(|_| OnceLock::new()).collect(),
            delta_pow_memo: RwLock::new(HashMap::new()),
            exps_memo: RwLock::new(HashMap::new()),
            antipode_memo: (0..p).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn num_roots(&self) -> usize {
        self.bounds.len()
    }

    /// prod_J N_J^(|Phi_J^+|) |Gamma|.
    pub fn dimension(&self) -> u128 {
        self.bounds.iter().map(|&n| n as u128).product::<u128>() * self.datum.group.order() as u128
    }

    pub fn component_algebra(&self, c: usize) -> &Arc<PbwAlgebra> {
        &self.comps[c]
    }

    /// Global root index of alpha_i.
    pub fn simple_root_index(&self, i: usize) -> usize {
        self.simple_root[i]
    }

    /// x_(beta_l) as a polynomial in the generators x_1, ..., x_theta.
    pub fn root_word(&self, l: usize) -> &BraidedPoly {
        &self.root_words[l]
    }

    pub fn degree_of(&self, e: &[u32]) -> Vec<i64> {
        let mut d = vec![0i64; self.datum.theta()];
        for (l, &k) in e.iter().enumerate() {
            if k > 0 {
                for (x, r) in d.iter_mut().zip(&self.datum.roots.roots[l]) {
                    *x += k as i64 * r;
                }
            }
        }
        d
    }

    pub fn height_of(&self, e: &[u32]) -> u64 {
        self.degree_of(e).iter().sum::<i64>() as u64
    }

    fn zero_exps(&self) -> Exps {
        vec![0; self.num_roots()]
    }

    pub fn one(&self) -> UElem {
        [((self.zero_exps(), self.datum.group.identity()), self.field.one())].into_iter().collect()
    }

    pub fn group_element(&self, g: &GroupElement) -> UElem {
        [((self.zero_exps(), g.clone()), self.field.one())].into_iter().collect()
    }

    pub fn basis_element(&self, e: Exps, g: GroupElement) -> UElem {
        [((e, g), self.field.one())].into_iter().collect()
    }

    /// The generator x_i.
    pub fn generator(&self, i: usize) -> UElem {
        let mut e = self.zero_exps();
        e[self.simple_root[i]] = 1;
        self.basis_element(e, self.datum.group.identity())
    }

    pub fn root_vector(&self, l: usize) -> UElem {
        let mut e = self.zero_exps();
        e[l] = 1;
        self.basis_element(e, self.datum.group.identity())
    }

    pub fn from_group_alg(&self, x: &GroupAlgElem) -> UElem {
        x.terms
            .iter()
            .map(|(g, c)| ((self.zero_exps(), g.clone()), c.clone()))
            .collect()
    }

    /// chi_alpha(g) for a degree alpha.
    fn char_on(&self, alpha: &[i64], g: &GroupElement) -> CycScalar {
        let d = &self.datum;
        let mut e: i128 = 0;
        for (i, &a) in alpha.iter().enumerate() {
            if a != 0 {
                e += a as i128 * d.group.char_eval_exp(&d.chi[i], g) as i128;
            }
        }
        let e = e * d.char_scale() as i128;
        self.field.zeta_pow(e.rem_euclid(d.modulus() as i128) as i64)
    }

    fn check_cap(&self, e: &[u32]) -> Result<(), UError> {
        if self.truncated {
            return Ok(());
        }
        for (c, r) in self.datum.roots.component_roots.iter().enumerate() {
            let deg: u64 = r
                .clone()
                .map(|l| e[l] as u64 * self.datum.roots.roots[l].iter().sum::<i64>() as u64)
                .sum();
            if deg > self.degree_cap {
                return Err(UError::DegreeCapExceeded {
                    component: c,
                    degree: deg,
                    cap: self.degree_cap,
                });
            }
        }
        Ok(())
    }

    /// Adds c x^e g to out, replacing x_(beta_l)^(N_l) by the central element u_l.
    fn push_reduced(&self, out: &mut UElem, e: Exps, g: GroupElement, c: CycScalar) -> Result<(), UError> {
        if c.is_zero() {
            return Ok(());
        }
        if self.truncated {
            if let Some(l) = (0..e.len()).find(|&l| e[l] >= self.bounds[l]) {
                let mut rest = e;
                rest[l] -= self.bounds[l];
                for (h, uc) in &self.u_root[l].terms {
                    self.push_reduced(out, rest.clone(), self.datum.group.mul(h, &g), &c * uc)?;
                }
                return Ok(());
            }
        } else {
            self.check_cap(&e)?;
        }
        add_to(out, (e, g), c);
        Ok(())
    }

    /// Right multiplication of g by the group element h (no character).
    fn times_group(&self, x: &UElem, h: &GroupElement) -> UElem {
        x.iter()
            .map(|((e, g), c)| ((e.clone(), self.datum.group.mul(g, h)), c.clone()))
            .collect()
    }

    /// x^a x_(beta_l).
    pub fn mul_root(&self, a: &[u32], l: usize) -> Result<Arc<UElem>, UError> {
        let key = (a.to_vec(), l);
        if let Some(r) = self.mul_memo.read().unwrap().get(&key) {
            return Ok(r.clone());
        }
        let rs = &self.datum.roots;
        let c = self.root_comp[l];
        let range = rs.component_roots[c].clone();
        let later = range.end;
        let high_nonzero = a[later..].iter().any(|&x| x > 0);
        let id = self.datum.group.identity();
        let mut out = UElem::new();
        if !high_nonzero {
            let m: Exps = a[range.clone()].to_vec();
            let r = self.comps[c].mul_root(&m, self.root_local[l])?;
            for (m2, coef) in r.iter() {
                let mut e = a.to_vec();
                e[range.clone()].copy_from_slice(m2);
                self.push_reduced(&mut out, e, id.clone(), coef.clone())?;
            }
        } else if rs.roots[l].iter().sum::<i64>() == 1 {
            let i = rs.roots[l].iter().position(|&x| x == 1).unwrap();
            let mut low = a.to_vec();
            let mut high = vec![0; a.len()];
            for k in later..a.len() {
                high[k] = a[k];
                low[k] = 0;
            }
            // H x_i = q(deg H, alpha_i) x_i H + E_i(H)
            let q = self.datum.q_bichar(&self.degree_of(&high), &rs.roots[l]);
            let dh = self.degree_of(&high);
            for ((e, g), coef) in self.mul_root(&low, l)?.iter() {
                let mut f = e.clone();
                for k in later..a.len() {
                    f[k] = high[k];
                }
                let ch = self.char_on(&dh, g);
                self.push_reduced(&mut out, f, g.clone(), coef * &q * ch)?;
            }
            for ((e, g), coef) in self.skew(&high, i)?.iter() {
                let mut f = low.clone();
                for k in later..a.len() {
                    f[k] += e[k];
                }
                self.push_reduced(&mut out, f, g.clone(), coef.clone())?;
            }
        } else {
            let start = self.basis_element(a.to_vec(), id);
            for (w, coef) in &self.root_words[l].terms {
                let mut cur = start.clone();
                for &x in w {
                    cur = self.mul_elem_root(&cur, self.simple_root[x as usize])?;
                }
                add_scaled(&mut out, &cur, coef);
            }
        }
        let out = Arc::new(out);
        self.mul_memo.write().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// E_i(x^h) for h supported on components after that of vertex i, defined by
    /// y x_i = q(deg y, alpha_i) x_i y + E_i(y).
    fn skew(&self, h: &[u32], i: usize) -> Result<Arc<UElem>, UError> {
        let key = (h.to_vec(), i);
        if let Some(r) = self.skew_memo.read().unwrap().get(&key) {
            return Ok(r.clone());
        }
        let mut out = UElem::new();
        if let Some(l) = h.iter().rposition(|&x| x > 0) {
            let mut y1 = h.to_vec();
            y1[l] -= 1;
            let rs = &self.datum.roots;
            let alpha_i = &rs.roots[self.simple_root[i]];
            // E(y1 y2) = q(deg y2, alpha_i) E(y1) y2 + y1 E(y2)
            if y1.iter().any(|&x| x > 0) {
                let e1 = self.skew(&y1, i)?;
                let q = self.datum.q_bichar(&rs.roots[l], alpha_i);
                let part = self.mul_elem_root(&e1, l)?;
                add_scaled(&mut out, &part, &q);
            }
            let base = self.skew_root(l, i)?;
            let y1e = self.basis_element(y1, self.datum.group.identity());
            let part = self.mul(&y1e, &base)?;
            add_scaled(&mut out, &part, &self.field.one());
        }
        let out = Arc::new(out);
        self.skew_memo.write().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// E_i(x_(beta_l)) from the expansion of x_(beta_l) in generators.
    fn skew_root(&self, l: usize, i: usize) -> Result<UElem, UError> {
        let d = &self.datum;
        let mut out = UElem::new();
        for (w, coef) in &self.root_words[l].terms {
            let mut prefix = self.one();
            let mut e = UElem::new();
            for &x in w {
                let j = x as usize;
                let q = d.q(j, i);
                let mut next = self.mul_elem_root(&e, self.simple_root[j])?;
                next = next.into_iter().map(|(k, v)| (k, v * &q)).collect();
                let lam = lambda_ext(d, &self.lambda, j, i);
                if !lam.is_zero() {
                    add_scaled(&mut next, &prefix, &lam);
                    let gg = d.group.mul(&d.g[j], &d.g[i]);
                    add_scaled(&mut next, &self.times_group(&prefix, &gg), &(-&lam));
                }
                e = next;
                prefix = self.mul_elem_root(&prefix, self.simple_root[j])?;
            }
            add_scaled(&mut out, &e, coef);
        }
        Ok(out)
    }

    /// x · x_(beta_l).
    pub fn mul_elem_root(&self, x: &UElem, l: usize) -> Result<UElem, UError> {
        let beta = &self.datum.roots.roots[l];
        let mut out = UElem::new();
        for ((e, g), c) in x {
            let ch = self.char_on(beta, g);
            let r = self.mul_root(e, l)?;
            for ((f, h), c2) in r.iter() {
                add_to(&mut out, (f.clone(), self.datum.group.mul(h, g)), c * &ch * c2);
            }
        }
        Ok(out)
    }

    /// x^a x^b.
    pub fn mul_exps(&self, a: &[u32], b: &[u32]) -> Result<Arc<UElem>, UError> {
        let key = (a.to_vec(), b.to_vec());
        if let Some(r) = self.exps_memo.read().unwrap().get(&key) {
            return Ok(r.clone());
        }
        let out = match b.iter().rposition(|&k| k > 0) {
            None => self.basis_element(a.to_vec(), self.datum.group.identity()),
            Some(l) => {
                let mut rest = b.to_vec();
                rest[l] -= 1;
                let head = self.mul_exps(a, &rest)?;
                self.mul_elem_root(&head, l)?
            }
        };
        let out = Arc::new(out);
        self.exps_memo.write().unwrap().insert(key, out.clone());
        Ok(out)
    }

    pub fn mul(&self, x: &UElem, y: &UElem) -> Result<UElem, UError> {
        let group = &self.datum.group;
        let mut out = UElem::new();
        for ((a, g), c1) in x {
            for ((b, h), c2) in y {
                let ch = self.char_on(&self.degree_of(b), g);
                let gh = group.mul(g, h);
                let coef = c1 * c2 * ch;
                for ((e, k), c3) in self.mul_exps(a, b)?.iter() {
                    add_to(&mut out, (e.clone(), group.mul(k, &gh)), &coef * c3);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, x: &UElem, y: &UElem) -> UElem {
        let mut out = x.clone();
        add_scaled(&mut out, y, &self.field.one());
        out
    }

    pub fn sub(&self, x: &UElem, y: &UElem) -> UElem {
        let mut out = x.clone();
        add_scaled(&mut out, y, &-self.field.one());
        out
    }

    pub fn scale(&self, x: &UElem, c: &CycScalar) -> UElem {
        let mut out = UElem::new();
        add_scaled(&mut out, x, c);
        out
    }

    /// Evaluates a noncommutative polynomial in the generators.
    pub fn eval_word_poly(&self, p: &BraidedPoly) -> Result<UElem, UError> {
        let mut out = UElem::new();
        for (w, c) in &p.terms {
            let mut cur = self.one();
            for &x in w {
                cur = self.mul_elem_root(&cur, self.simple_root[x as usize])?;
            }
            add_scaled(&mut out, &cur, c);
        }
        Ok(out)
    }

    pub fn counit(&self, x: &UElem) -> CycScalar {
        let mut s = self.field.zero();
        for ((e, _), c) in x {
            if e.iter().all(|&k| k == 0) {
                s += c;
            }
        }
        s
    }

    // ---- tensor products ----

    pub fn tensor(&self, x: &UElem, y: &UElem) -> UTensor {
        let mut out = UTensor::new();
        for (a, c1) in x {
            for (b, c2) in y {
                add_to(&mut out, (a.clone(), b.clone()), c1 * c2);
            }
        }
        out
    }

    pub fn tensor_mul(&self, x: &UTensor, y: &UTensor) -> Result<UTensor, UError> {
        let mut out = UTensor::new();
        let mut cache: HashMap<(Basis, Basis), UElem> = HashMap::new();
        let mut prod = |a: &Basis, b: &Basis| -> Result<UElem, UError> {
            if let Some(r) = cache.get(&(a.clone(), b.clone())) {
                return Ok(r.clone());
            }
            let r = self.mul(
                &[(a.clone(), self.field.one())].into_iter().collect(),
                &[(b.clone(), self.field.one())].into_iter().collect(),
            )?;
            cache.insert((a.clone(), b.clone()), r.clone());
            Ok(r)
        };
        for ((a1, b1), c1) in x {
            for ((a2, b2), c2) in y {
                let left = prod(a1, a2)?;
                let right = prod(b1, b2)?;
                let c = c1 * c2;
                for (k1, v1) in &left {
                    let cv = &c * v1;
                    for (k2, v2) in &right {
                        add_to(&mut out, (k1.clone(), k2.clone()), &cv * v2);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Delta(x_(beta_l)) from Delta(x_i) = g_i ⊗ x_i + x_i ⊗ 1.
    pub fn delta_root(&self, l: usize) -> Result<Arc<UTensor>, UError> {
        if let Some(x) = self.delta_memo[l].get() {
            return Ok(x.clone());
        }
        let d = &self.datum;
        let mut out = UTensor::new();
        for (w, coef) in &self.root_words[l].terms {
            let mut acc = self.tensor(&self.one(), &self.one());
            for &x in w {
                let i = x as usize;
                let xi = self.generator(i);
                let mut dx = self.tensor(&self.group_element(&d.g[i]), &xi);
                for (k, v) in self.tensor(&xi, &self.one()) {
                    add_to(&mut dx, k, v);
                }
                acc = self.tensor_mul(&acc, &dx)?;
            }
            add_scaled(&mut out, &acc, coef);
        }
        let out = Arc::new(out);
        let _ = self.delta_memo[l].set(out.clone());
        Ok(out)
    }

    /// Delta(x^e), built as Delta(x^(e - e_l)) Delta(x_(beta_l)) for the last l.
    fn delta_monomial(&self, e: &[u32]) -> Result<Arc<UTensor>, UError> {
        if let Some(x) = self.delta_pow_memo.read().unwrap().get(e) {
            return Ok(x.clone());
        }
        let out = match e.iter().rposition(|&k| k > 0) {
            None => self.tensor(&self.one(), &self.one()),
            Some(l) => {
                let mut rest = e.to_vec();
                rest[l] -= 1;
                let head = self.delta_monomial(&rest)?;
                self.tensor_mul(&head, &*self.delta_root(l)?)?
            }
        };
        let out = Arc::new(out);
        self.delta_pow_memo.write().unwrap().insert(e.to_vec(), out.clone());
        Ok(out)
    }

    pub fn coproduct(&self, x: &UElem) -> Result<UTensor, UError> {
        let group = &self.datum.group;
        let mut out = UTensor::new();
        for ((e, g), c) in x {
            for (((e1, h1), (e2, h2)), c2) in self.delta_monomial(e)?.iter() {
                add_to(
                    &mut out,
                    ((e1.clone(), group.mul(h1, g)), (e2.clone(), group.mul(h2, g))),
                    c * c2,
                );
            }
        }
        Ok(out)
    }

    /// S(x_(beta_l)) from S(x_i) = -g_i^(-1) x_i, extended anti-multiplicatively.
    pub fn antipode_root(&self, l: usize) -> Result<Arc<UElem>, UError> {
        if let Some(x) = self.antipode_memo[l].get() {
            return Ok(x.clone());
        }
        let d = &self.datum;
        let mut out = UElem::new();
        for (w, coef) in &self.root_words[l].terms {
            let mut acc = self.one();
            for &x in w.iter().rev() {
                let i = x as usize;
                let gi = d.group.inv(&d.g[i]);
                let s = self.scale(&self.mul(&self.group_element(&gi), &self.generator(i))?, &-self.field.one());
                acc = self.mul(&acc, &s)?;
            }
            add_scaled(&mut out, &acc, coef);
        }
        let out = Arc::new(out);
        let _ = self.antipode_memo[l].set(out.clone());
        Ok(out)
    }

    pub fn antipode(&self, x: &UElem) -> Result<UElem, UError> {
        let mut out = UElem::new();
        for ((e, g), c) in x {
            let mut acc = self.group_element(&self.datum.group.inv(g));
            for l in (0..e.len()).rev() {
                for _ in 0..e[l] {
                    acc = self.mul(&acc, &*self.antipode_root(l)?)?;
                }
            }
            add_scaled(&mut out, &acc, c);
        }
        Ok(out)
    }

    /// m (f ⊗ id) or m (id ⊗ f) applied to a tensor.
    fn contract(&self, t: &UTensor, left: bool) -> Result<UElem, UError> {
        let mut out = UElem::new();
        for ((a, b), c) in t {
            let ea: UElem = [(a.clone(), self.field.one())].into_iter().collect();
            let eb: UElem = [(b.clone(), self.field.one())].into_iter().collect();
            let prod = if left {
                self.mul(&self.antipode(&ea)?, &eb)?
            } else {
                self.mul(&ea, &self.antipode(&eb)?)?
            };
            add_scaled(&mut out, &prod, c);
        }
        Ok(out)
    }

    /// A random basis element; with `max_height`, only exponents of total root height at most that.
    pub fn sample_basis(&self, rng: &mut ChaCha8Rng, max_height: Option<u64>) -> Basis {
        let elements = self.datum.group.elements();
        let g = elements[rng.gen_range(0..elements.len())].clone();
        loop {
            let e: Exps = self.bounds.iter().map(|&n| rng.gen_range(0..n)).collect();
            match max_height {
                Some(h) => {
                    // Thin the exponents until the height bound holds.
                    let mut e = e;
                    while self.height_of(&e) > h {
                        let l = rng.gen_range(0..e.len());
                        if e[l] > 0 {
                            e[l] = rng.gen_range(0..e[l]);
                        }
                    }
                    return (e, g);
                }
                None => return (e, g),
            }
        }
    }

    /// Runs the Hopf algebra axiom checks.
    pub fn verify_hopf(&self, samples: usize, seed: u64) -> Result<HopfReport, UError> {
        let mut report = HopfReport::default();
        let d = &self.datum;
        let group = &d.group;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let large = self.dimension() > 5000;
        let bound = if large { Some(SAMPLE_HEIGHT) } else { None };

        report.record("dimension", self.dimension() == expected_dimension(d), format!("{}", self.dimension()));

        // Generators: x_i and the invariant-factor generators of Gamma.
        let mut gens: Vec<UElem> = (0..d.theta()).map(|i| self.generator(i)).collect();
        for k in 0..group.rank() {
            let mut c = vec![0i64; group.rank()];
            c[k] = 1;
            gens.push(self.group_element(&group.element_from(&c)));
        }
        let samples_el: Vec<UElem> = (0..2 * samples)
            .map(|_| {
                let b = self.sample_basis(&mut rng, bound);
                [(b, self.field.one())].into_iter().collect()
            })
            .collect();

        let mut ok = true;
        let mut detail = String::new();
        for x in &gens {
            for y in &gens {
                if !self.multiplicative(x, y)? {
                    ok = false;
                    detail = "generator pair".into();
                }
            }
        }
        report.record("coproduct multiplicative on generators", ok, detail);

        let mut ok = true;
        for pair in samples_el.chunks(2) {
            if pair.len() == 2 && !self.multiplicative(&pair[0], &pair[1])? {
                ok = false;
            }
        }
        report.record("coproduct multiplicative on samples", ok, format!("{} pairs", samples));

        let mut ok = true;
        for x in gens.iter().chain(samples_el.iter().take(COASSOC_SAMPLES)) {
            if !self.coassociative(x)? {
                ok = false;
            }
        }
        report.record("coassociativity", ok, String::new());

        let mut ok_counit = true;
        let mut ok_antipode = true;
        for x in gens.iter().chain(samples_el.iter().take(ANTIPODE_SAMPLES)) {
            let dx = self.coproduct(x)?;
            let mut l = UElem::new();
            let mut r = UElem::new();
            for ((a, b), c) in &dx {
                let ea: UElem = [(a.clone(), c.clone())].into_iter().collect();
                let eb: UElem = [(b.clone(), c.clone())].into_iter().collect();
                add_scaled(&mut l, &eb, &self.counit(&ea));
                add_scaled(&mut r, &ea, &self.counit(&eb));
            }
            if l != *x || r != *x {
                ok_counit = false;
            }
            let unit = self.scale(&self.one(), &self.counit(x));
            if self.contract(&dx, true)? != unit || self.contract(&dx, false)? != unit {
                ok_antipode = false;
            }
        }
        report.record("counit", ok_counit, String::new());
        report.record("antipode", ok_antipode, String::new());

        let mut ok = true;
        let mut checked = 0;
        for (c, pbw) in self.comps.iter().enumerate() {
            let n = d.orders[c];
            for a in 0..pbw.num_roots() {
                for b in 0..pbw.num_roots() {
                    let h = (pbw.roots[a].iter().sum::<i64>() + n as i64 * pbw.roots[b].iter().sum::<i64>()) as u64;
                    if h > pbw.degree_cap.min(default_degree_cap(n) + n) {
                        continue;
                    }
                    checked += 1;
                    if !pbw.q_commutation_defect(a, b)?.is_empty() {
                        ok = false;
                    }
                }
            }
        }
        report.record("q-commutation with N-th powers", ok, format!("{} pairs", checked));

        let mut ok = true;
        for l in 0..self.num_roots() {
            for h in self.u_root[l].terms.keys() {
                if d.chi.iter().any(|chi| group.char_eval_exp(chi, h) != 0) {
                    ok = false;
                }
            }
        }
        report.record("u_alpha central", ok, String::new());

        // Group-likes: the filtration by root height is a coalgebra filtration with
        // degree zero part k[Gamma], so G(u) = Gamma.
        let candidates: Vec<Basis> = if large {
            samples_el.iter().map(|x| x.keys().next().unwrap().clone()).collect()
        } else {
            self.basis()
        };
        let mut ok = true;
        for b in &candidates {
            let hb = self.height_of(&b.0);
            let x: UElem = [(b.clone(), self.field.one())].into_iter().collect();
            for ((l, r), _) in self.coproduct(&x)? {
                if self.height_of(&l.0) + self.height_of(&r.0) > hb {
                    ok = false;
                }
            }
        }
        for g in group.elements() {
            let x = self.group_element(&g);
            if self.coproduct(&x)? != self.tensor(&x, &x) {
                ok = false;
            }
        }
        for b in candidates.iter().filter(|b| b.0.iter().any(|&k| k > 0)).take(GROUPLIKE_PROBES) {
            let x = self.add(&self.group_element(&b.1), &self.basis_element(b.0.clone(), b.1.clone()));
            if self.coproduct(&x)? == self.tensor(&x, &x) {
                ok = false;
            }
        }
        report.record(
            "group-likes are Gamma",
            ok,
            if large { "sampled".into() } else { "exhaustive".into() },
        );
        Ok(report)
    }

    /// t Delta(y), multiplying by Delta(y) one root vector factor at a time.
    pub fn mul_by_coproduct(&self, t: &UTensor, y: &UElem) -> Result<UTensor, UError> {
        let group = &self.datum.group;
        let mut out = UTensor::new();
        for ((e, h), c) in y {
            let mut acc = t.clone();
            for (l, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    acc = self.tensor_mul(&acc, &*self.delta_root(l)?)?;
                }
            }
            for (((e1, h1), (e2, h2)), c2) in acc {
                add_to(&mut out, ((e1, group.mul(&h1, h)), (e2, group.mul(&h2, h))), c * &c2);
            }
        }
        Ok(out)
    }

    fn multiplicative(&self, x: &UElem, y: &UElem) -> Result<bool, UError> {
        let lhs = self.coproduct(&self.mul(x, y)?)?;
        let rhs = self.mul_by_coproduct(&self.coproduct(x)?, y)?;
        Ok(lhs == rhs)
    }

    fn coassociative(&self, x: &UElem) -> Result<bool, UError> {
        let dx = self.coproduct(x)?;
        let mut left: BTreeMap<(Basis, Basis, Basis), CycScalar> = BTreeMap::new();
        let mut right: BTreeMap<(Basis, Basis, Basis), CycScalar> = BTreeMap::new();
        for ((a, b), c) in &dx {
            let da = self.coproduct(&[(a.clone(), self.field.one())].into_iter().collect())?;
            for ((a1, a2), c2) in da {
                add_to(&mut left, (a1, a2, b.clone()), c * &c2);
            }
            let db = self.coproduct(&[(b.clone(), self.field.one())].into_iter().collect())?;
            for ((b1, b2), c2) in db {
                add_to(&mut right, (a.clone(), b1, b2), c * &c2);
            }
        }
        Ok(left == right)
    }

    /// All basis elements (exponent vectors times group elements).
    pub fn basis(&self) -> Vec<Basis> {
        let mut out = Vec::new();
        let elements = self.datum.group.elements();
        let mut e = self.zero_exps();
        loop {
            for g in &elements {
                out.push((e.clone(), g.clone()));
            }
            let mut pos = 0;
            loop {
                if pos == e.len() {
                    return out;
                }
                e[pos] += 1;
                if e[pos] < self.bounds[pos] {
                    break;
                }
                e[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Prime divisors of the dimension, each with an element of Gamma of that order.
    pub fn cauchy_check(&self) -> CauchyReport {
        cauchy_report(&self.datum, self.dimension())
    }
}

/// Height bound for sampled basis elements when the algebra is large.
pub const SAMPLE_HEIGHT: u64 = 4;
const COASSOC_SAMPLES: usize = 20;
const ANTIPODE_SAMPLES: usize = 20;
const GROUPLIKE_PROBES: usize = 20;

/// prod_J N_J^(|Phi_J^+|) |Gamma| computed from the datum alone.
pub fn expected_dimension(d: &Datum) -> u128 {
    let mut dim = d.group.order() as u128;
    for (c, r) in d.roots.component_roots.iter().enumerate() {
        dim *= (d.orders[c] as u128).pow(r.len() as u32);
    }
    dim
}

#[derive(Clone, Debug, Default)]
pub struct HopfReport {
    pub checks: Vec<(String, bool, String)>,
}

impl HopfReport {
    fn record(&mut self, name: &str, ok: bool, detail: String) {
        self.checks.push((name.to_string(), ok, detail));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.1).map(|c| c.0.as_str()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CauchyReport {
    pub dimension: u128,
    /// (p, witness of order p, p divides |Gamma|)
    pub primes: Vec<(u64, Option<GroupElement>, bool)>,
}

impl CauchyReport {
    pub fn passed(&self) -> bool {
        self.primes.iter().all(|(_, w, div)| w.is_some() && *div)
    }
}

pub fn prime_factors(mut n: u128) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u128;
    while p * p <= n {
        if n % p == 0 {
            out.push(p as u64);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n as u64);
    }
    out
}

pub fn cauchy_report(d: &Datum, dimension: u128) -> CauchyReport {
    let group = &d.group;
    let primes = prime_factors(dimension)
        .into_iter()
        .map(|p| {
            let witness = group.elements().into_iter().find(|g| group.element_order(g) == p);
            (p, witness, group.order() % p == 0)
        })
        .collect();
    CauchyReport { dimension, primes }
}
