//! The subalgebra K(D) generated by z_l = x_(beta_l)^N inside R(D) for one connected
//! component: coproduct constants t^a_(b,c), the products gamma_(b,c), and the
//! recursively defined group algebra elements u^a and u_alpha(mu).

use crate::datum::{Datum, Mu};
use crate::groups::{AbelianGroup, Character, GroupAlgElem, GroupElement};
use crate::quotients::{Exps, PbwAlgebra, QuotientError, RElem};
use crate::scalars::{CycScalar, Field};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KError {
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error("coproduct term {left:?} ⊗ {right:?} is not a product of N-th powers of root vectors")]
    NotInK { left: Exps, right: Exps },
    #[error("remainder for u^{0:?} is not a multiple of 1 - h^a")]
    ConsistencyFailure(Exps),
    #[error("component {0} does not exist")]
    NoSuchComponent(usize),
    #[error("root {0:?} is not a positive root")]
    NotARoot(Vec<i64>),
}

/// Element of R ⊗ R in PBW coordinates.
pub type RTensor = BTreeMap<(Exps, Exps), CycScalar>;
/// t^a_(b,c) for fixed a.
pub type CoproductConstants = BTreeMap<(Exps, Exps), CycScalar>;

fn add_tensor(map: &mut RTensor, k: (Exps, Exps), c: CycScalar) {
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

/// K(D_J) for the component `component` of a datum.
pub struct KAlgebra {
    pub component: usize,
    pub pbw: Arc<PbwAlgebra>,
    /// N_J.
    pub n: u64,
    /// h_l = g_(beta_l)^N per local root.
    pub h: Vec<GroupElement>,
    /// eta_l = chi_(beta_l)^N per local root.
    pub eta: Vec<Character>,
    /// Global root indices of the component.
    pub global_roots: std::ops::Range<usize>,
    group: AbelianGroup,
    full_field: Field,
    delta_z: Mutex<Vec<Option<Arc<RTensor>>>>,
    constants: Mutex<HashMap<Exps, Arc<CoproductConstants>>>,
}

impl KAlgebra {
    pub fn new(d: &Datum, component: usize) -> Result<Self, KError> {
        if component >= d.roots.components.len() {
            return Err(KError::NoSuchComponent(component));
        }
        let comp = &d.roots.components[component];
        let sub: Vec<Vec<i64>> = comp
            .indices
            .iter()
            .map(|&i| comp.indices.iter().map(|&j| d.cartan[i][j]).collect())
            .collect();
        let braiding = Arc::new(d.component_braiding(component, true));
        let pbw = PbwAlgebra::new(braiding, &sub, Some(u64::MAX))?;
        let range = d.roots.component_roots[component].clone();
        for (local, gl) in range.clone().enumerate() {
            let proj: Vec<i64> = comp.indices.iter().map(|&i| d.roots.roots[gl][i]).collect();
            assert_eq!(proj, pbw.roots[local], "local and global convex orders agree");
        }
        let n = d.orders[component];
        let h = range
            .clone()
            .map(|l| d.group.pow(&d.g_alpha(&d.roots.roots[l]), n as i64))
            .collect();
        let eta = range
            .clone()
            .map(|l| d.group.char_pow(&d.chi_alpha(&d.roots.roots[l]), n as i64))
            .collect();
        let p = range.len();
        Ok(KAlgebra {
            component,
            pbw: Arc::new(pbw),
            n,
            h,
            eta,
            global_roots: range,
            group: d.group.clone(),
            full_field: d.field.clone(),
            delta_z: Mutex::new(vec![None; p]),
            constants: Mutex::new(HashMap::new()),
        })
    }

    pub fn num_roots(&self) -> usize {
        self.pbw.num_roots()
    }

    /// The field of the constants (the smallest one containing the component braiding).
    pub fn field(&self) -> &Field {
        &self.pbw.braiding.field
    }

    /// underline(a) = sum a_l beta_l in local coordinates.
    pub fn underline(&self, a: &[u32]) -> Vec<i64> {
        self.pbw.degree_of(a)
    }

    pub fn height(&self, a: &[u32]) -> u64 {
        self.pbw.height_of(a)
    }

    pub fn h_pow(&self, a: &[u32]) -> GroupElement {
        let mut g = self.group.identity();
        for (l, &k) in a.iter().enumerate() {
            g = self.group.mul(&g, &self.group.pow(&self.h[l], k as i64));
        }
        g
    }

    pub fn eta_pow(&self, a: &[u32]) -> Character {
        let mut c = self.group.trivial_character();
        for (l, &k) in a.iter().enumerate() {
            c = self.group.char_mul(&c, &self.group.char_pow(&self.eta[l], k as i64));
        }
        c
    }

    /// gamma_(b,c) = prod_(k>l) eta_l(h_k)^(b_k c_l), in the full field.
    pub fn gamma(&self, b: &[u32], c: &[u32]) -> CycScalar {
        let m = self.group.exponent();
        let mut e: u128 = 0;
        for k in 0..b.len() {
            for l in 0..k {
                let x = self.group.char_eval_exp(&self.eta[l], &self.h[k]) as u128;
                e = (e + x * b[k] as u128 * c[l] as u128) % m as u128;
            }
        }
        let scale = self.full_field.order() / m;
        self.full_field.zeta_pow((e * scale as u128 % self.full_field.order() as u128) as i64)
    }

    /// N a as PBW exponents.
    pub fn z_exps(&self, a: &[u32]) -> Exps {
        a.iter().map(|&x| x * self.n as u32).collect()
    }

    fn from_z_exps(&self, e: &[u32]) -> Option<Exps> {
        let n = self.n as u32;
        if e.iter().all(|&x| x % n == 0) {
            Some(e.iter().map(|&x| x / n).collect())
        } else {
            None
        }
    }

    /// Product in the braided tensor product R ⊗ R.
    pub fn tensor_mul(&self, x: &RTensor, y: &RTensor) -> Result<RTensor, KError> {
        let b = &self.pbw.braiding;
        let mut out = RTensor::new();
        for ((l1, r1), c1) in x {
            let dr1 = self.pbw.degree_of(r1);
            for ((l2, r2), c2) in y {
                let f = b.bichar(&dr1, &self.pbw.degree_of(l2));
                let left = self.pbw.mul_monomials(l1, l2)?;
                let right = self.pbw.mul_monomials(r1, r2)?;
                let coef = c1 * c2 * f;
                for (el, cl) in &left {
                    let cl = &coef * cl;
                    for (er, cr) in &right {
                        add_tensor(&mut out, (el.clone(), er.clone()), &cl * cr);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Delta(x_(beta_l)) in R ⊗ R.
    pub fn delta_root(&self, l: usize) -> Result<RTensor, KError> {
        let t = self.pbw.root_vectors[l].coproduct();
        let p = self.num_roots();
        let mut nf_cache: HashMap<Vec<u8>, RElem> = HashMap::new();
        let mut nf = |w: &Vec<u8>| -> Result<RElem, KError> {
            if let Some(x) = nf_cache.get(w) {
                return Ok(x.clone());
            }
            let x = if w.is_empty() {
                self.pbw.monomial(vec![0; p])
            } else {
                let poly = crate::braided::BraidedPoly::word(&self.pbw.braiding, w.clone());
                self.pbw.normal_form(&poly)?
            };
            nf_cache.insert(w.clone(), x.clone());
            Ok(x)
        };
        let mut out = RTensor::new();
        for ((wl, wr), c) in &t.terms {
            let left = nf(wl)?;
            let right = nf(wr)?;
            for (el, cl) in &left {
                for (er, cr) in &right {
                    add_tensor(&mut out, (el.clone(), er.clone()), c * cl * cr);
                }
            }
        }
        Ok(out)
    }

    /// Delta(z_l) = Delta(x_(beta_l))^N in R ⊗ R.
    pub fn delta_z(&self, l: usize) -> Result<Arc<RTensor>, KError> {
        if let Some(x) = &self.delta_z.lock().unwrap()[l] {
            return Ok(x.clone());
        }
        let dx = self.delta_root(l)?;
        let mut acc = dx.clone();
        for _ in 1..self.n {
            acc = self.tensor_mul(&acc, &dx)?;
        }
        for (left, right) in acc.keys() {
            if self.from_z_exps(left).is_none() || self.from_z_exps(right).is_none() {
                return Err(KError::NotInK {
                    left: left.clone(),
                    right: right.clone(),
                });
            }
        }
        let acc = Arc::new(acc);
        self.delta_z.lock().unwrap()[l] = Some(acc.clone());
        Ok(acc)
    }

    /// Delta(z^a) in R ⊗ R, in PBW coordinates.
    pub fn delta_z_pow(&self, a: &[u32]) -> Result<RTensor, KError> {
        let p = self.num_roots();
        let mut acc: RTensor = [((vec![0; p], vec![0; p]), self.field().one())].into_iter().collect();
        for (l, &k) in a.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let dz = self.delta_z(l)?;
            for _ in 0..k {
                acc = self.tensor_mul(&acc, &dz)?;
            }
        }
        Ok(acc)
    }

    /// The constants t^a_(b,c) (b, c nonzero), in the constants field.
    pub fn coproduct_constants(&self, a: &[u32]) -> Result<Arc<CoproductConstants>, KError> {
        if let Some(x) = self.constants.lock().unwrap().get(a) {
            return Ok(x.clone());
        }
        let delta = self.delta_z_pow(a)?;
        let p = self.num_roots();
        let zero = vec![0u32; p];
        let za = self.z_exps(a);
        let mut out = CoproductConstants::new();
        let mut saw_left = false;
        let mut saw_right = false;
        for ((left, right), c) in &delta {
            let (Some(b), Some(cc)) = (self.from_z_exps(left), self.from_z_exps(right)) else {
                return Err(KError::NotInK {
                    left: left.clone(),
                    right: right.clone(),
                });
            };
            let bad = || KError::NotInK {
                left: left.clone(),
                right: right.clone(),
            };
            if b == zero || cc == zero {
                // Only z^a ⊗ 1 and 1 ⊗ z^a, with coefficient 1.
                if !c.is_one() {
                    return Err(bad());
                }
                if cc == zero && *left == za {
                    saw_left = true;
                } else if b == zero && *right == za {
                    saw_right = true;
                } else {
                    return Err(bad());
                }
                continue;
            }
            out.insert((b, cc), c.clone());
        }
        if !saw_left || !saw_right {
            return Err(KError::NotInK { left: za.clone(), right: za });
        }
        let out = Arc::new(out);
        self.constants.lock().unwrap().insert(a.to_vec(), out.clone());
        Ok(out)
    }

    /// Constants embedded into the datum's field.
    pub fn coproduct_constants_full(&self, a: &[u32]) -> Result<CoproductConstants, KError> {
        let t = self.coproduct_constants(a)?;
        Ok(t.iter()
            .map(|(k, v)| (k.clone(), self.full_field.embed(v).expect("subfield")))
            .collect())
    }

    /// Both sides of the coassociativity identity on constants for z^a, as maps on
    /// triples (x, y, z) standing for z^x ⊗ z^y ⊗ z^z.
    #[allow(clippy::type_complexity)]
    pub fn coassociativity_sides(
        &self,
        a: &[u32],
    ) -> Result<(BTreeMap<(Exps, Exps, Exps), CycScalar>, BTreeMap<(Exps, Exps, Exps), CycScalar>), KError> {
        let ta = self.coproduct_constants(a)?;
        let mut lhs: BTreeMap<(Exps, Exps, Exps), CycScalar> = BTreeMap::new();
        let mut rhs: BTreeMap<(Exps, Exps, Exps), CycScalar> = BTreeMap::new();
        let add = |m: &mut BTreeMap<(Exps, Exps, Exps), CycScalar>, k: (Exps, Exps, Exps), c: CycScalar| {
            let e = m.entry(k.clone()).or_insert_with(|| c.field().zero());
            *e += &c;
            if e.is_zero() {
                m.remove(&k);
            }
        };
        for ((b, c), t) in ta.iter() {
            for ((f, g), t2) in self.coproduct_constants(c)?.iter() {
                add(&mut lhs, (b.clone(), f.clone(), g.clone()), t * t2);
            }
            for ((dd, e), t2) in self.coproduct_constants(b)?.iter() {
                add(&mut rhs, (dd.clone(), e.clone(), c.clone()), t * t2);
            }
        }
        Ok((lhs, rhs))
    }

    /// All nonzero a with height(underline(a)) <= max_height, sorted by height.
    pub fn exponents_up_to(&self, max_height: u64) -> Vec<Exps> {
        let heights: Vec<u64> = self.pbw.roots.iter().map(|r| r.iter().sum::<i64>() as u64).collect();
        fn go(heights: &[u64], l: usize, rem: u64, cur: &mut Exps, out: &mut Vec<Exps>) {
            if l == heights.len() {
                if cur.iter().any(|&x| x > 0) {
                    out.push(cur.clone());
                }
                return;
            }
            let mut k = 0;
            while k * heights[l] <= rem {
                cur[l] = k as u32;
                go(heights, l + 1, rem - k * heights[l], cur, out);
                k += 1;
            }
            cur[l] = 0;
        }
        let mut out = Vec::new();
        go(&heights, 0, max_height, &mut vec![0; heights.len()], &mut out);
        out.sort_by_key(|a| (self.height(a), a.clone()));
        out
    }

    /// The family u^a, mu_a for all a up to the largest root height.
    pub fn build_ufamily(&self, mu: &Mu) -> Result<UFamily, KError> {
        let field = &self.full_field;
        let group = &self.group;
        let max_h = self.pbw.roots.iter().map(|r| r.iter().sum::<i64>() as u64).max().unwrap_or(0);
        let mu_l: Vec<CycScalar> = self
            .global_roots
            .clone()
            .map(|g| mu.get(g).cloned().unwrap_or_else(|| field.zero()))
            .collect();
        let all_zero = mu_l.iter().all(|x| x.is_zero());
        let mut fam = UFamily {
            component: self.component,
            u: BTreeMap::new(),
            mu: BTreeMap::new(),
            t: BTreeMap::new(),
            h: BTreeMap::new(),
        };
        let one = GroupAlgElem::from_element(group.identity(), field);
        for a in self.exponents_up_to(max_h) {
            let ha = self.h_pow(&a);
            fam.h.insert(a.clone(), ha.clone());
            if all_zero {
                fam.u.insert(a.clone(), GroupAlgElem::zero());
                fam.mu.insert(a.clone(), field.zero());
                continue;
            }
            let t = self.coproduct_constants_full(&a)?;
            let one_minus_h = one.sub(&GroupAlgElem::from_element(ha.clone(), field));
            let mut sum = GroupAlgElem::zero();
            for ((b, c), tv) in &t {
                let mb = &fam.mu[b];
                if mb.is_zero() {
                    continue;
                }
                sum = sum.add(&fam.u[c].scale(&(tv * mb)));
            }
            let last = a.iter().rposition(|&x| x > 0).unwrap();
            let simple = a.iter().sum::<u32>() == 1;
            let (ua, mua) = if simple {
                let m = mu_l[last].clone();
                (one_minus_h.scale(&m).add(&sum), m)
            } else {
                let mut r = a.clone();
                r[last] -= 1;
                let mut s = vec![0; a.len()];
                s[last] = 1;
                let ua = fam.u[&r].mul(&fam.u[&s], group);
                let w = ua.sub(&sum);
                let mua = if group.is_identity(&ha) {
                    if !w.is_zero() {
                        return Err(KError::ConsistencyFailure(a.clone()));
                    }
                    field.zero()
                } else {
                    let m = w.coeff(&group.identity()).cloned().unwrap_or_else(|| field.zero());
                    if w != one_minus_h.scale(&m) {
                        return Err(KError::ConsistencyFailure(a.clone()));
                    }
                    m
                };
                (ua, mua)
            };
            fam.t.insert(a.clone(), t);
            fam.u.insert(a.clone(), ua);
            fam.mu.insert(a, mua);
        }
        Ok(fam)
    }
}

/// Element of k[Gamma] ⊗ k[Gamma].
pub type GroupTensor = BTreeMap<(GroupElement, GroupElement), CycScalar>;

fn add_gt(m: &mut GroupTensor, k: (GroupElement, GroupElement), c: CycScalar) {
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

pub fn group_tensor(x: &GroupAlgElem, y: &GroupAlgElem) -> GroupTensor {
    let mut out = GroupTensor::new();
    for (g, a) in &x.terms {
        for (h, b) in &y.terms {
            add_gt(&mut out, (g.clone(), h.clone()), a * b);
        }
    }
    out
}

pub fn group_coproduct(x: &GroupAlgElem) -> GroupTensor {
    x.terms.iter().map(|(g, c)| ((g.clone(), g.clone()), c.clone())).collect()
}

/// u^a and mu_a for one component, with the constants used to build them.
#[derive(Clone, Debug)]
pub struct UFamily {
    pub component: usize,
    pub u: BTreeMap<Exps, GroupAlgElem>,
    pub mu: BTreeMap<Exps, CycScalar>,
    /// t^a_(b,c) in the datum's field; empty when all mu vanish.
    pub t: BTreeMap<Exps, CoproductConstants>,
    pub h: BTreeMap<Exps, GroupElement>,
}

impl UFamily {
    /// Checks Delta(u^a) = h^a ⊗ u^a + u^a ⊗ 1 + sum t^a_(b,c) u^b h^c ⊗ u^c for every a.
    pub fn check_coproducts(&self, group: &AbelianGroup, field: &Field) -> Result<(), Exps> {
        let one = GroupAlgElem::from_element(group.identity(), field);
        for (a, ua) in &self.u {
            let lhs = group_coproduct(ua);
            let mut rhs = group_tensor(&GroupAlgElem::from_element(self.h[a].clone(), field), ua);
            for (k, v) in group_tensor(ua, &one) {
                add_gt(&mut rhs, k, v);
            }
            if let Some(t) = self.t.get(a) {
                for ((b, c), tv) in t {
                    let left = self.u[b].mul(&GroupAlgElem::from_element(self.h[c].clone(), field), group);
                    for (k, v) in group_tensor(&left.scale(tv), &self.u[c]) {
                        add_gt(&mut rhs, k, v);
                    }
                }
            }
            if lhs != rhs {
                return Err(a.clone());
            }
        }
        Ok(())
    }

    /// u^(e_l) for local root l.
    pub fn u_root(&self, l: usize, p: usize) -> &GroupAlgElem {
        let mut e = vec![0; p];
        e[l] = 1;
        &self.u[&e]
    }
}

/// u_alpha(mu) for a positive root alpha (global coordinates).
pub fn u_alpha(d: &Datum, mu: &Mu, alpha: &[i64]) -> Result<GroupAlgElem, KError> {
    let l = d.roots.root_index(alpha).ok_or_else(|| KError::NotARoot(alpha.to_vec()))?;
    let c = d.roots.root_component[l];
    let k = KAlgebra::new(d, c)?;
    let fam = k.build_ufamily(mu)?;
    let local = l - k.global_roots.start;
    Ok(fam.u_root(local, k.num_roots()).clone())
}
