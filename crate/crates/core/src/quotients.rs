//! The quotient R(D) of T(V) by the quantum Serre relations for one connected
//! component, with normal forms in the PBW basis of ordered root vector monomials.
//!
//! Straightening relations x_(beta_k) x_(beta_j) (j < k) are computed once by exact
//! linear algebra in the word space of degree beta_j + beta_k; all products are
//! then reduced by memoized rewriting. Word-space ideal components are also
//! available directly for low degrees.

use crate::braided::{root_vectors, serre_element, BraidedError, BraidedPoly, Braiding, Word};
use crate::linalg::{Rref, SparseVec};
use crate::roots::{CartanMatrix, RootError, RootSystem};
use crate::scalars::CycScalar;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, RwLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuotientError {
    #[error("total degree {degree} exceeds the degree cap {cap}")]
    DegreeCapExceeded { degree: u64, cap: u64 },
    #[error("PBW basis check failed: {0}")]
    PBWFailure(String),
    #[error(transparent)]
    Braided(#[from] BraidedError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("expected a connected Cartan matrix")]
    NotConnected,
}

/// Exponent vector of a PBW monomial x_(beta_1)^(e_1) ... x_(beta_p)^(e_p).
pub type Exps = Vec<u32>;
/// Element of R(D) in PBW coordinates; no explicit zeros.
pub type RElem = BTreeMap<Exps, CycScalar>;

pub fn add_term(e: &mut RElem, k: Exps, c: CycScalar) {
    if c.is_zero() {
        return;
    }
    match e.get_mut(&k) {
        Some(x) => {
            *x += &c;
            if x.is_zero() {
                e.remove(&k);
            }
        }
        None => {
            e.insert(k, c);
        }
    }
}

pub fn scale(e: &RElem, c: &CycScalar) -> RElem {
    let mut out = RElem::new();
    if c.is_zero() {
        return out;
    }
    for (k, x) in e {
        out.insert(k.clone(), x * c);
    }
    out
}

pub fn add_scaled(acc: &mut RElem, e: &RElem, c: &CycScalar) {
    for (k, x) in e {
        add_term(acc, k.clone(), x * c);
    }
}

/// Default cap on total degree: 2 N + 10, or the value of QF_DEGREE_CAP.
pub fn default_degree_cap(n: u64) -> u64 {
    std::env::var("QF_DEGREE_CAP")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(2 * n + 10)
}

/// All words with the given letter counts, in lexicographic order.
pub fn words_of_degree(gamma: &[i64]) -> Vec<Word> {
    fn go(rem: &mut Vec<i64>, cur: &mut Word, out: &mut Vec<Word>) {
        if rem.iter().all(|&x| x == 0) {
            out.push(cur.clone());
            return;
        }
        for i in 0..rem.len() {
            if rem[i] > 0 {
                rem[i] -= 1;
                cur.push(i as u8);
                go(rem, cur, out);
                cur.pop();
                rem[i] += 1;
            }
        }
    }
    let mut out = Vec::new();
    if gamma.iter().any(|&x| x < 0) {
        return out;
    }
    go(&mut gamma.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// Homogeneous component of a two-sided ideal of T(V) given by homogeneous generators.
pub struct IdealComponent {
    pub words: Vec<Word>,
    pub index: HashMap<Word, usize>,
    pub basis: Rref,
}

impl IdealComponent {
    pub fn vector(&self, p: &BraidedPoly) -> SparseVec {
        p.terms
            .iter()
            .map(|(w, c)| (self.index[w], c.clone()))
            .collect()
    }

    pub fn quotient_dim(&self) -> usize {
        self.words.len() - self.basis.rank()
    }
}

/// Two-sided ideal of T(V) generated by homogeneous elements, computed degree by degree.
pub struct WordIdeal {
    braiding: Arc<Braiding>,
    gens: Vec<(Vec<i64>, BraidedPoly)>,
    memo: Mutex<HashMap<Vec<i64>, Arc<IdealComponent>>>,
}

impl WordIdeal {
    pub fn new(braiding: &Arc<Braiding>, gens: Vec<BraidedPoly>) -> Self {
        let gens = gens
            .into_iter()
            .filter(|g| !g.is_zero())
            .map(|g| (g.degree().expect("homogeneous generator"), g))
            .collect();
        WordIdeal {
            braiding: braiding.clone(),
            gens,
            memo: Mutex::new(HashMap::new()),
        }
    }

    /// I_gamma = sum_i (x_i I_(gamma - alpha_i) + I_(gamma - alpha_i) x_i) + span of generators of degree gamma.
    pub fn component(&self, gamma: &[i64]) -> Arc<IdealComponent> {
        if let Some(c) = self.memo.lock().unwrap().get(gamma) {
            return c.clone();
        }
        let words = words_of_degree(gamma);
        let index: HashMap<Word, usize> = words.iter().enumerate().map(|(k, w)| (w.clone(), k)).collect();
        let mut basis = Rref::new();
        for i in 0..gamma.len() {
            if gamma[i] == 0 {
                continue;
            }
            let mut lower = gamma.to_vec();
            lower[i] -= 1;
            let sub = self.component(&lower);
            for row in sub.basis.rows() {
                let mut left = SparseVec::new();
                let mut right = SparseVec::new();
                for (&col, c) in row {
                    let w = &sub.words[col];
                    let mut lw = vec![i as u8];
                    lw.extend_from_slice(w);
                    left.insert(index[&lw], c.clone());
                    let mut rw = w.clone();
                    rw.push(i as u8);
                    right.insert(index[&rw], c.clone());
                }
                basis.insert(&left);
                basis.insert(&right);
            }
        }
        for (deg, g) in &self.gens {
            if deg.as_slice() == gamma {
                let v: SparseVec = g.terms.iter().map(|(w, c)| (index[w], c.clone())).collect();
                basis.insert(&v);
            }
        }
        let comp = Arc::new(IdealComponent { words, index, basis });
        self.memo.lock().unwrap().insert(gamma.to_vec(), comp.clone());
        comp
    }

    pub fn braiding(&self) -> &Arc<Braiding> {
        &self.braiding
    }
}

type Relation = Arc<Vec<(Exps, CycScalar)>>;

/// R(D_J) for a connected Cartan matrix in standard form.
pub struct PbwAlgebra {
    pub braiding: Arc<Braiding>,
    pub cartan: CartanMatrix,
    /// Positive roots in convex order, local coordinates.
    pub roots: Vec<Vec<i64>>,
    pub root_vectors: Vec<BraidedPoly>,
    /// Common order N of the q_ii.
    pub order: u64,
    pub degree_cap: u64,
    simple_root: Vec<usize>,
    serre_ideal: WordIdeal,
    straight: RwLock<HashMap<(usize, usize), Relation>>,
    memo: RwLock<HashMap<(Exps, usize), Arc<RElem>>>,
}

impl PbwAlgebra {
    pub fn new(braiding: Arc<Braiding>, cartan: &CartanMatrix, degree_cap: Option<u64>) -> Result<Self, QuotientError> {
        let rs = RootSystem::new(cartan)?;
        if rs.components.len() != 1 {
            return Err(QuotientError::NotConnected);
        }
        let roots = rs.roots.clone();
        let rv = root_vectors(&braiding, &roots)?;
        let theta = cartan.len();
        let mut serre = Vec::new();
        for i in 0..theta {
            for j in 0..theta {
                if i != j {
                    serre.push(serre_element(&braiding, i, j, cartan[i][j]));
                }
            }
        }
        let m = braiding.field.order();
        let order = m / num_integer::gcd(braiding.exps[0][0], m);
        let simple_root = (0..theta)
            .map(|i| {
                let mut e = vec![0; theta];
                e[i] = 1;
                rs.root_index(&e).expect("simple roots are roots")
            })
            .collect();
        Ok(PbwAlgebra {
            serre_ideal: WordIdeal::new(&braiding, serre),
            braiding,
            cartan: cartan.clone(),
            roots,
            root_vectors: rv,
            order,
            degree_cap: degree_cap.unwrap_or_else(|| default_degree_cap(order)),
            simple_root,
            straight: RwLock::new(HashMap::new()),
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.degree_cap = cap;
        self
    }

    pub fn theta(&self) -> usize {
        self.cartan.len()
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    /// Root index of the simple root alpha_i.
    pub fn simple_root_index(&self, i: usize) -> usize {
        self.simple_root[i]
    }

    pub fn serre_ideal(&self) -> &WordIdeal {
        &self.serre_ideal
    }

    /// Homogeneous component of the Serre ideal in word coordinates.
    pub fn ideal_component(&self, gamma: &[i64]) -> Arc<IdealComponent> {
        self.serre_ideal.component(gamma)
    }

    pub fn degree_of(&self, e: &[u32]) -> Vec<i64> {
        let mut d = vec![0i64; self.theta()];
        for (l, &k) in e.iter().enumerate() {
            if k > 0 {
                for (x, r) in d.iter_mut().zip(&self.roots[l]) {
                    *x += k as i64 * r;
                }
            }
        }
        d
    }

    pub fn height_of(&self, e: &[u32]) -> u64 {
        self.degree_of(e).iter().sum::<i64>() as u64
    }

    fn check_cap(&self, degree: u64) -> Result<(), QuotientError> {
        if degree > self.degree_cap {
            Err(QuotientError::DegreeCapExceeded {
                degree,
                cap: self.degree_cap,
            })
        } else {
            Ok(())
        }
    }

    /// PBW monomials of degree gamma, sorted.
    pub fn pbw_monomials(&self, gamma: &[i64]) -> Vec<Exps> {
        fn go(roots: &[Vec<i64>], l: usize, rem: &mut Vec<i64>, cur: &mut Exps, out: &mut Vec<Exps>) {
            if l == roots.len() {
                if rem.iter().all(|&x| x == 0) {
                    out.push(cur.clone());
                }
                return;
            }
            let mut k = 0;
            loop {
                go(roots, l + 1, rem, cur, out);
                for (x, r) in rem.iter_mut().zip(&roots[l]) {
                    *x -= r;
                }
                k += 1;
                if rem.iter().any(|&x| x < 0) {
                    break;
                }
                cur[l] += 1;
            }
            for (x, r) in rem.iter_mut().zip(&roots[l]) {
                *x += k * r;
            }
            cur[l] = 0;
        }
        let mut out = Vec::new();
        if gamma.iter().any(|&x| x < 0) {
            return out;
        }
        go(&self.roots, 0, &mut gamma.to_vec(), &mut vec![0; self.roots.len()], &mut out);
        out.sort();
        out
    }

    /// The PBW monomial as an element of T(V).
    pub fn monomial_word_poly(&self, e: &[u32]) -> BraidedPoly {
        let mut acc = BraidedPoly::one(&self.braiding);
        for (l, &k) in e.iter().enumerate() {
            for _ in 0..k {
                acc = acc.mul(&self.root_vectors[l]).expect("same braiding");
            }
        }
        acc
    }

    fn straightening(&self, k: usize, j: usize) -> Result<Relation, QuotientError> {
        if let Some(r) = self.straight.read().unwrap().get(&(k, j)) {
            return Ok(r.clone());
        }
        let gamma: Vec<i64> = self.roots[k].iter().zip(&self.roots[j]).map(|(a, b)| a + b).collect();
        let ideal = self.ideal_component(&gamma);
        let nwords = ideal.words.len();
        let monomials = self.pbw_monomials(&gamma);
        if monomials.len() != ideal.quotient_dim() {
            return Err(QuotientError::PBWFailure(format!(
                "degree {:?}: {} PBW monomials but quotient dimension {}",
                gamma,
                monomials.len(),
                ideal.quotient_dim()
            )));
        }
        // Rows (v_e | tag_e); reducing (t | 0) leaves (0 | -coefficients).
        let mut tagged = Rref::new();
        for (pos, e) in monomials.iter().enumerate() {
            let mut v = ideal.basis.reduce(&ideal.vector(&self.monomial_word_poly(e)));
            if v.is_empty() {
                return Err(QuotientError::PBWFailure(format!("monomial {:?} lies in the Serre ideal", e)));
            }
            v.insert(nwords + pos, self.braiding.field.one());
            if !tagged.insert(&v) {
                return Err(QuotientError::PBWFailure(format!("PBW monomials of degree {:?} are dependent", gamma)));
            }
        }
        for p in tagged.pivots() {
            if *p >= nwords {
                return Err(QuotientError::PBWFailure(format!("PBW monomials of degree {:?} are dependent", gamma)));
            }
        }
        let target = self.root_vectors[k].mul(&self.root_vectors[j])?;
        let rem = tagged.reduce(&ideal.basis.reduce(&ideal.vector(&target)));
        let mut rel = Vec::new();
        for (&col, c) in &rem {
            if col < nwords {
                return Err(QuotientError::PBWFailure(format!("x_{} x_{} is not in the PBW span", k + 1, j + 1)));
            }
            rel.push((monomials[col - nwords].clone(), -c));
        }
        // Convexity: only x_j x_k and monomials in roots strictly between j and k.
        for (e, _) in &rel {
            let mut jk = vec![0u32; self.roots.len()];
            jk[j] = 1;
            jk[k] = 1;
            let inside = e.iter().enumerate().all(|(l, &x)| x == 0 || (l > j && l < k));
            if *e != jk && !inside {
                return Err(QuotientError::PBWFailure(format!(
                    "straightening of x_{} x_{} leaves the interval: {:?}",
                    k + 1,
                    j + 1,
                    e
                )));
            }
        }
        let rel = Arc::new(rel);
        self.straight.write().unwrap().insert((k, j), rel.clone());
        Ok(rel)
    }

    /// All straightening relations, computed eagerly.
    pub fn straightening_relations(&self) -> Result<Vec<((usize, usize), Relation)>, QuotientError> {
        let p = self.roots.len();
        let mut out = Vec::new();
        for k in 0..p {
            for j in 0..k {
                out.push(((k, j), self.straightening(k, j)?));
            }
        }
        Ok(out)
    }

    /// Monomial e times the root vector x_(beta_j).
    pub fn mul_root(&self, e: &[u32], j: usize) -> Result<Arc<RElem>, QuotientError> {
        let last = e.iter().rposition(|&x| x > 0);
        match last {
            None => {
                let mut f = e.to_vec();
                f[j] += 1;
                return Ok(Arc::new([(f, self.braiding.field.one())].into_iter().collect()));
            }
            Some(k) if k <= j => {
                let mut f = e.to_vec();
                f[j] += 1;
                return Ok(Arc::new([(f, self.braiding.field.one())].into_iter().collect()));
            }
            _ => {}
        }
        let key = (e.to_vec(), j);
        if let Some(r) = self.memo.read().unwrap().get(&key) {
            return Ok(r.clone());
        }
        let k = last.unwrap();
        let mut head = e.to_vec();
        head[k] -= 1;
        let rel = self.straightening(k, j)?;
        let mut out = RElem::new();
        for (m, c) in rel.iter() {
            let prod = self.mul_monomials(&head, m)?;
            add_scaled(&mut out, &prod, c);
        }
        let out = Arc::new(out);
        self.memo.write().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// Product of two PBW monomials, without a degree check.
    pub fn mul_monomials(&self, a: &[u32], b: &[u32]) -> Result<RElem, QuotientError> {
        let mut cur: RElem = [(a.to_vec(), self.braiding.field.one())].into_iter().collect();
        for (l, &k) in b.iter().enumerate() {
            for _ in 0..k {
                cur = self.mul_elem_root(&cur, l)?;
            }
        }
        Ok(cur)
    }

    pub fn mul_elem_root(&self, x: &RElem, l: usize) -> Result<RElem, QuotientError> {
        let mut next = RElem::new();
        for (e, c) in x {
            let r = self.mul_root(e, l)?;
            add_scaled(&mut next, &r, c);
        }
        Ok(next)
    }

    pub fn mul(&self, a: &RElem, b: &RElem) -> Result<RElem, QuotientError> {
        let mut out = RElem::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                self.check_cap(self.height_of(ea) + self.height_of(eb))?;
                let prod = self.mul_monomials(ea, eb)?;
                add_scaled(&mut out, &prod, &(ca * cb));
            }
        }
        Ok(out)
    }

    /// Normal form of an element of T(V) in R(D).
    pub fn normal_form(&self, x: &BraidedPoly) -> Result<RElem, QuotientError> {
        if *x.braiding != *self.braiding {
            return Err(QuotientError::Braided(BraidedError::AmbientMismatch));
        }
        let mut out = RElem::new();
        let p = self.roots.len();
        for (w, c) in &x.terms {
            self.check_cap(w.len() as u64)?;
            let mut cur: RElem = [(vec![0; p], c.clone())].into_iter().collect();
            for &i in w {
                cur = self.mul_elem_root(&cur, self.simple_root[i as usize])?;
            }
            for (k, v) in cur {
                add_term(&mut out, k, v);
            }
        }
        Ok(out)
    }

    pub fn monomial(&self, e: Exps) -> RElem {
        [(e, self.braiding.field.one())].into_iter().collect()
    }

    pub fn unit_exps(&self, l: usize, k: u32) -> Exps {
        let mut e = vec![0; self.roots.len()];
        e[l] = k;
        e
    }

    /// Graded dimensions of R(D)/(x_alpha^N) for all degrees of total degree <= up_to,
    /// using that the ideal is spanned by x_(beta_l)^N times PBW monomials.
    pub fn nichols_graded_dims(&self, up_to: u64) -> Result<BTreeMap<Vec<i64>, u64>, QuotientError> {
        let n = self.order as u32;
        let theta = self.theta();
        let mut out = BTreeMap::new();
        for gamma in degrees_up_to(theta, up_to) {
            let basis = self.pbw_monomials(&gamma);
            if basis.is_empty() {
                continue;
            }
            let index: HashMap<&Exps, usize> = basis.iter().enumerate().map(|(k, e)| (e, k)).collect();
            let mut rref = Rref::new();
            for l in 0..self.roots.len() {
                let rest: Vec<i64> = gamma
                    .iter()
                    .zip(&self.roots[l])
                    .map(|(g, r)| g - n as i64 * r)
                    .collect();
                for m in self.pbw_monomials(&rest) {
                    let prod = self.mul_monomials(&self.unit_exps(l, n), &m)?;
                    let v: SparseVec = prod.into_iter().map(|(e, c)| (index[&e], c)).collect();
                    rref.insert(&v);
                }
            }
            out.insert(gamma, (basis.len() - rref.rank()) as u64);
        }
        Ok(out)
    }

    /// Graded dimensions of T(V)/(Serre relations) computed in the word space.
    pub fn serre_quotient_dims_wordspace(&self, up_to: u64) -> BTreeMap<Vec<i64>, u64> {
        degrees_up_to(self.theta(), up_to)
            .into_iter()
            .map(|g| {
                let c = self.ideal_component(&g);
                (g, c.quotient_dim() as u64)
            })
            .collect()
    }

    /// Graded dimensions of T(V)/(Serre relations, x_alpha^N) computed in the word space.
    pub fn nichols_dims_wordspace(&self, up_to: u64) -> BTreeMap<Vec<i64>, u64> {
        let mut gens: Vec<BraidedPoly> = self.serre_ideal.gens.iter().map(|(_, g)| g.clone()).collect();
        for rv in &self.root_vectors {
            let mut p = BraidedPoly::one(&self.braiding);
            for _ in 0..self.order {
                p = p.mul(rv).expect("same braiding");
            }
            gens.push(p);
        }
        let ideal = WordIdeal::new(&self.braiding, gens);
        degrees_up_to(self.theta(), up_to)
            .into_iter()
            .map(|g| {
                let c = ideal.component(&g);
                (g, c.quotient_dim() as u64)
            })
            .collect()
    }

    /// x_(beta_a) x_(beta_b)^N - q(beta_a, beta_b)^N x_(beta_b)^N x_(beta_a) in normal form.
    pub fn q_commutation_defect(&self, a: usize, b: usize) -> Result<RElem, QuotientError> {
        let n = self.order as u32;
        let xa = self.unit_exps(a, 1);
        let xb = self.unit_exps(b, n);
        let lhs = self.mul_monomials(&xa, &xb)?;
        let rhs = self.mul_monomials(&xb, &xa)?;
        let q = self.braiding.bichar(&self.roots[a], &self.roots[b]);
        let qn = q.pow(n as i64).expect("nonzero");
        let mut out = lhs;
        add_scaled(&mut out, &rhs, &(-qn));
        Ok(out)
    }
}

/// All gamma in N^theta with 0 < |gamma| <= up_to.
pub fn degrees_up_to(theta: usize, up_to: u64) -> Vec<Vec<i64>> {
    fn go(theta: usize, rem: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == theta {
            if cur.iter().sum::<i64>() > 0 {
                out.push(cur.clone());
            }
            return;
        }
        for k in 0..=rem {
            cur.push(k);
            go(theta, rem - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(theta, up_to as i64, &mut Vec::new(), &mut out);
    out.sort_by_key(|g| (g.iter().sum::<i64>(), g.clone()));
    out
}
