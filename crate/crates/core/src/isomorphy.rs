//! Isomorphisms between u(D', lambda', mu') and u(D, lambda, mu) as triples
//! (phi, sigma, s): a group isomorphism, a permutation of the vertices and one
//! nonzero scalar per vertex.
//!
//! The scalar conditions are multiplicative equations prod_i s_i^(e_i) = c, collected
//! into a `MonomialSystem` and decided with a Smith normal form.

use crate::braided::{root_vectors, BraidedPoly};
use crate::datum::{lambda_ext, Datum, DatumError, Lambda, Mu};
use crate::groups::{enumerate_isomorphisms, GroupAlgElem, GroupHom};
use crate::kalgebra::{KAlgebra, KError, UFamily};
use crate::quotients::{default_degree_cap, Exps, PbwAlgebra, QuotientError};
use crate::scalars::{CycScalar, CyclotomicField, Field, ScalarError};
use crate::smith::smith_normal_form;
use crate::uqgroup::{add_to, UAlgebra, UError, UElem, UTensor};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsoError {
    #[error("ranks differ: {src} vs {dst}")]
    RankMismatch { src: usize, dst: usize },
    #[error("ord(q_ii) <= 4 for vertex {0} of the target datum")]
    OrderHypothesisViolated(usize),
    #[error("constant of equation {0} is zero")]
    ZeroConstant(usize),
    #[error("no explicit witness is available for this triple")]
    NoWitness,
    #[error(transparent)]
    Datum(#[from] DatumError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    K(#[from] KError),
    #[error(transparent)]
    U(#[from] UError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A datum with linking and root vector parameters.
#[derive(Clone, Debug)]
pub struct Triple {
    pub datum: Datum,
    pub lambda: Lambda,
    pub mu: Mu,
}

impl Triple {
    /// The same triple with all scalars in Q(zeta_m).
    pub fn with_field(&self, m: u64) -> Result<Triple, IsoError> {
        let datum = self.datum.with_field(m)?;
        Ok(Triple {
            lambda: self.lambda.embed(&datum.field)?,
            mu: self.mu.embed(&datum.field)?,
            datum,
        })
    }
}

/// prod_i s_i^(rows[j][i]) = constants[j] for every j.
#[derive(Clone, Debug)]
pub struct MonomialSystem {
    pub field: Field,
    pub unknowns: usize,
    pub rows: Vec<Vec<i64>>,
    pub constants: Vec<CycScalar>,
}

/// Scalars s_1..s_theta in Q(zeta_m), m = field order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub field: Field,
    pub s: Vec<CycScalar>,
}

#[derive(Clone, Debug)]
pub enum MonomialSolution {
    /// v with v E = 0 and prod c_j^(v_j) = value != 1.
    Unsolvable { kernel: Vec<i64>, value: CycScalar },
    /// Solvable over the algebraic closure; `witness` is None when some root needed
    /// is not of the form (rational) * (root of unity).
    Solvable { witness: Option<Witness> },
}

impl MonomialSystem {
    pub fn new(field: &Field, unknowns: usize) -> Self {
        MonomialSystem {
            field: field.clone(),
            unknowns,
            rows: Vec::new(),
            constants: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<i64>, c: CycScalar) {
        self.rows.push(row);
        self.constants.push(c);
    }

    /// prod_j c_j^(v_j).
    pub fn evaluate_kernel(&self, v: &[i64]) -> Result<CycScalar, ScalarError> {
        let mut acc = self.field.one();
        for (c, &e) in self.constants.iter().zip(v) {
            if e != 0 {
                acc = &acc * &c.pow(e)?;
            }
        }
        Ok(acc)
    }

    /// Whether the scalars satisfy every equation (after embedding the constants).
    pub fn is_satisfied_by(&self, w: &Witness) -> Result<bool, ScalarError> {
        for (row, c) in self.rows.iter().zip(&self.constants) {
            let mut acc = w.field.one();
            for (s, &e) in w.s.iter().zip(row) {
                if e != 0 {
                    acc = &acc * &s.pow(e)?;
                }
            }
            if acc != w.field.embed(c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// y with y^d = c as (rational, m, k) meaning y = r * zeta_m^k.
fn root_of(c: &CycScalar, d: u64) -> Option<(BigRational, u64, u64)> {
    let (r, k) = c.as_rational_times_root()?;
    if r.is_negative() && d % 2 == 1 {
        // An odd root of -c, negated, avoids enlarging the field.
        let (a, m, j) = root_of(&-c, d)?;
        return Some((-a, m, j));
    }
    let m = c.field().order();
    let (r, m0, k0) = if r.is_negative() {
        let m0 = num_integer::lcm(m, 2);
        (-r, m0, (k * (m0 / m) + m0 / 2) % m0)
    } else {
        (r, m, k)
    };
    let exact = |x: &BigInt| -> Option<BigInt> {
        let y = x.nth_root(d as u32);
        (num_traits::pow(y.clone(), d as usize) == *x).then_some(y)
    };
    let root_r = BigRational::new(exact(r.numer())?, exact(r.denom())?);
    let g = num_integer::gcd(d, m0);
    if k0 % g == 0 {
        let mg = m0 / g;
        let dg = (d / g) % mg;
        let inv = mod_inverse(dg, mg);
        let j = ((k0 / g) as u128 * inv as u128 % mg as u128) as u64;
        Some((root_r, m0, j))
    } else {
        Some((root_r, m0 * d, k0))
    }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    t.rem_euclid(m as i128) as u64
}

/// Decides a monomial system through E = U^(-1) S V^(-1): with s = y^V the
/// equations become y_k^(S_kk) = prod_j c_j^(U_kj), and rows past the rank are the
/// kernel conditions.
pub fn solve_monomial(sys: &MonomialSystem) -> Result<MonomialSolution, IsoError> {
    for (j, c) in sys.constants.iter().enumerate() {
        if c.is_zero() {
            return Err(IsoError::ZeroConstant(j));
        }
    }
    let n = sys.unknowns;
    let rows = sys.rows.len();
    let e: Vec<Vec<i128>> = sys.rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let snf = smith_normal_form(&e, rows, n);
    let transformed: Vec<CycScalar> = (0..rows)
        .map(|k| {
            let v: Vec<i64> = snf.u[k].iter().map(|&x| x as i64).collect();
            sys.evaluate_kernel(&v)
        })
        .collect::<Result<_, _>>()?;
    for k in snf.rank..rows {
        if !transformed[k].is_one() {
            return Ok(MonomialSolution::Unsolvable {
                kernel: snf.u[k].iter().map(|&x| x as i64).collect(),
                value: transformed[k].clone(),
            });
        }
    }
    let mut roots = Vec::with_capacity(n);
    let mut big_m = sys.field.order();
    for k in 0..n {
        if k >= snf.rank {
            roots.push((BigRational::one(), 1, 0));
            continue;
        }
        let d = snf.s[k][k] as u64;
        match root_of(&transformed[k], d) {
            Some(r) => {
                big_m = num_integer::lcm(big_m, r.1);
                roots.push(r);
            }
            None if d == 1 => {
                // Not of the form r * zeta^k but no root is needed.
                roots.push((BigRational::one(), 0, 0));
            }
            None => return Ok(MonomialSolution::Solvable { witness: None }),
        }
    }
    let field = CyclotomicField::new(big_m);
    let y: Vec<CycScalar> = roots
        .iter()
        .enumerate()
        .map(|(k, (r, m, j))| {
            if *m == 0 {
                return field.embed(&transformed[k]);
            }
            Ok(&field.from_rational(r) * &field.zeta_pow((*j * (big_m / m)) as i64))
        })
        .collect::<Result<_, ScalarError>>()?;
    let mut s = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = field.one();
        for (k, yk) in y.iter().enumerate() {
            let e = snf.v[i][k] as i64;
            if e != 0 {
                acc = &acc * &yk.pow(e)?;
            }
        }
        s.push(acc);
    }
    let w = Witness { field, s };
    debug_assert!(sys.is_satisfied_by(&w).unwrap_or(false));
    Ok(MonomialSolution::Solvable { witness: Some(w) })
}

/// t^a with F^sigma(x^sigma_alpha)^N = sum_a t^a z^a, for local root index `root` of
/// component `component`, sigma a diagram automorphism in local indices.
pub fn iso_constants(
    d: &Datum,
    component: usize,
    sigma: &[usize],
    root: usize,
    cap: Option<u64>,
) -> Result<BTreeMap<Exps, CycScalar>, IsoError> {
    let comp = &d.roots.components[component];
    let sub: Vec<Vec<i64>> = comp
        .indices
        .iter()
        .map(|&i| comp.indices.iter().map(|&j| d.cartan[i][j]).collect())
        .collect();
    let braiding = Arc::new(d.component_braiding(component, true));
    let pbw = PbwAlgebra::new(braiding.clone(), &sub, cap)?;
    let n = d.orders[component];
    let height = pbw.roots[root].iter().sum::<i64>() as u64;
    if n * height > pbw.degree_cap {
        return Err(QuotientError::DegreeCapExceeded {
            degree: n * height,
            cap: pbw.degree_cap,
        }
        .into());
    }
    let r = sub.len();
    let permuted = Arc::new(crate::braided::Braiding::new(
        braiding.field.clone(),
        (0..r).map(|k| (0..r).map(|l| braiding.exps[sigma[k]][sigma[l]]).collect()).collect(),
    ));
    let rv = root_vectors(&permuted, &pbw.roots).map_err(QuotientError::from)?;
    let mut image = BraidedPoly::zero(&braiding);
    for (w, c) in &rv[root].terms {
        image.add_term(w.iter().map(|&x| sigma[x as usize] as u8).collect(), c.clone());
    }
    let x = pbw.normal_form(&image)?;
    let mut acc = pbw.monomial(vec![0; pbw.num_roots()]);
    for _ in 0..n {
        acc = pbw.mul(&acc, &x)?;
    }
    let mut out = BTreeMap::new();
    for (e, c) in acc {
        if e.iter().any(|&x| x as u64 % n != 0) {
            return Err(KError::NotInK {
                left: e.clone(),
                right: vec![],
            }
            .into());
        }
        out.insert(e.iter().map(|&x| x / n as u32).collect(), d.field.embed(&c)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoTriple {
    pub phi: GroupHom,
    /// 0-based images of the source vertices.
    pub sigma: Vec<usize>,
    /// None when the scalars exist but are not cyclotomic of the supported shape.
    pub s: Option<Witness>,
}

/// A candidate (phi, sigma) whose scalar conditions could not be computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Undecided {
    pub phi: GroupHom,
    pub sigma: Vec<usize>,
    /// Component of the target datum.
    pub component: usize,
}

#[derive(Clone, Debug, Default)]
pub struct IsoSearch {
    pub found: Vec<IsoTriple>,
    pub undecided: Vec<Undecided>,
    /// (phi, sigma) candidates passing the group conditions but with unsolvable scalars.
    pub unsolvable: Vec<(GroupHom, Vec<usize>, Vec<i64>)>,
}

impl IsoSearch {
    pub fn is_decided(&self) -> bool {
        self.undecided.is_empty()
    }
}

/// Vertex permutations sigma with phi(g'_i) = g_sigma(i) and chi'_i = chi_sigma(i) phi.
fn matching_permutations(src: &Datum, dst: &Datum, phi: &GroupHom) -> Vec<Vec<usize>> {
    let theta = src.theta();
    let candidates: Vec<Vec<usize>> = (0..theta)
        .map(|i| {
            let gi = phi.apply(&dst.group, &src.g[i]);
            (0..theta)
                .filter(|&j| gi == dst.g[j] && src.chi[i] == phi.pull_back(&src.group, &dst.group, &dst.chi[j]))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(theta);
    let mut used = vec![false; theta];
    fn go(c: &[Vec<usize>], cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let i = cur.len();
        if i == c.len() {
            out.push(cur.clone());
            return;
        }
        for &j in &c[i] {
            if !used[j] {
                used[j] = true;
                cur.push(j);
                go(c, cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    go(&candidates, &mut cur, &mut used, &mut out);
    out
}

/// Target component of each source component, with sigma in local indices.
fn local_permutations(src: &Datum, dst: &Datum, sigma: &[usize]) -> Vec<(usize, usize, Vec<usize>)> {
    src.roots
        .components
        .iter()
        .enumerate()
        .map(|(cs, comp)| {
            let cd = dst.roots.component_of_vertex(sigma[comp.indices[0]]);
            let base = dst.roots.components[cd].indices[0];
            let local = comp.indices.iter().map(|&i| sigma[i] - base).collect();
            (cs, cd, local)
        })
        .collect()
}

struct Families {
    src: Vec<UFamily>,
    dst: Vec<UFamily>,
    dst_k: Vec<KAlgebra>,
}

fn families(src: &Triple, dst: &Triple) -> Result<Families, IsoError> {
    let mut f = Families {
        src: Vec::new(),
        dst: Vec::new(),
        dst_k: Vec::new(),
    };
    for c in 0..src.datum.roots.components.len() {
        f.src.push(KAlgebra::new(&src.datum, c)?.build_ufamily(&src.mu)?);
    }
    for c in 0..dst.datum.roots.components.len() {
        let k = KAlgebra::new(&dst.datum, c)?;
        f.dst.push(k.build_ufamily(&dst.mu)?);
        f.dst_k.push(k);
    }
    Ok(f)
}

/// Searches all (phi, sigma) and solves for the scalars of each.
pub fn find_isomorphisms(src: &Triple, dst: &Triple, cap: Option<u64>) -> Result<IsoSearch, IsoError> {
    let (ds, dd) = (&src.datum, &dst.datum);
    if ds.theta() != dd.theta() {
        return Err(IsoError::RankMismatch {
            src: ds.theta(),
            dst: dd.theta(),
        });
    }
    for i in 0..dd.theta() {
        if dd.vertex_order(i) <= 4 {
            return Err(IsoError::OrderHypothesisViolated(i + 1));
        }
    }
    let mut out = IsoSearch::default();
    let phis = enumerate_isomorphisms(&ds.group, &dd.group);
    if phis.is_empty() {
        return Ok(out);
    }
    let fam = families(src, dst)?;
    let mut constants_memo: HashMap<(usize, Vec<usize>, usize), Arc<BTreeMap<Exps, CycScalar>>> = HashMap::new();
    let theta = ds.theta();
    let field = &dd.field;
    for phi in phis {
        'sigma: for sigma in matching_permutations(ds, dd, &phi) {
            for i in 0..theta {
                for j in 0..theta {
                    assert_eq!(
                        ds.cartan[i][j], dd.cartan[sigma[i]][sigma[j]],
                        "matching group data forces equal Cartan entries when ord(q_ii) > 4"
                    );
                }
            }
            let mut sys = MonomialSystem::new(field, theta);
            // Linking parameters.
            for i in 0..theta {
                for j in i + 1..theta {
                    if ds.same_component(i, j) {
                        continue;
                    }
                    let l_src = src.lambda.get(i, j).cloned().unwrap_or_else(|| field.zero());
                    let l_src = field.embed(&l_src)?;
                    let l_dst = lambda_ext(dd, &dst.lambda, sigma[i], sigma[j]);
                    match (l_src.is_zero(), l_dst.is_zero()) {
                        (true, true) => {}
                        (false, false) => {
                            let mut row = vec![0; theta];
                            row[i] += 1;
                            row[j] += 1;
                            sys.push(row, l_src.div(&l_dst)?);
                        }
                        _ => continue 'sigma,
                    }
                }
            }
            // Root vector parameters.
            for (cs, cd, local) in local_permutations(ds, dd, &sigma) {
                let comp_s = &ds.roots.components[cs];
                let n = dd.orders[cd];
                let identity = local.iter().enumerate().all(|(k, &x)| k == x);
                let kd = &fam.dst_k[cd];
                let p = kd.num_roots();
                if !identity {
                    let max_h = kd.pbw.roots.iter().map(|r| r.iter().sum::<i64>() as u64).max().unwrap();
                    let c = cap.unwrap_or_else(|| default_degree_cap(n));
                    if n * max_h > c {
                        out.undecided.push(Undecided {
                            phi: phi.clone(),
                            sigma: sigma.clone(),
                            component: cd,
                        });
                        continue 'sigma;
                    }
                }
                for (local_l, l_src) in ds.roots.component_roots[cs].clone().enumerate() {
                    let alpha_local = &kd.pbw.roots[local_l];
                    let mut row = vec![0i64; theta];
                    for (k, &nk) in alpha_local.iter().enumerate() {
                        row[comp_s.indices[k]] += nk * n as i64;
                    }
                    let l_dst = kd.global_roots.start + local_l;
                    let (lhs, rhs) = if identity {
                        (
                            src.mu.get(l_src).cloned().unwrap_or_else(|| field.zero()),
                            dst.mu.get(l_dst).cloned().unwrap_or_else(|| field.zero()),
                        )
                    } else {
                        let t = match constants_memo.get(&(cd, local.clone(), local_l)) {
                            Some(t) => t.clone(),
                            None => {
                                let t = Arc::new(iso_constants(dd, cd, &local, local_l, cap)?);
                                constants_memo.insert((cd, local.clone(), local_l), t.clone());
                                t
                            }
                        };
                        let lhs = fam.src[cs].u_root(local_l, p).map_hom(&phi, &dd.group);
                        let mut rhs = GroupAlgElem::zero();
                        for (a, tv) in t.iter() {
                            let mut term = GroupAlgElem::scalar(tv.clone(), &dd.group);
                            for (l, &k) in a.iter().enumerate() {
                                if k > 0 {
                                    let f = fam.dst[cd].u_root(l, p).pow(k as u64, &dd.group, field);
                                    term = term.mul(&f, &dd.group);
                                }
                            }
                            rhs = rhs.add(&term);
                        }
                        match proportionality(&lhs, &rhs) {
                            Proportional::BothZero => continue,
                            Proportional::No => continue 'sigma,
                            Proportional::Factor(c) => (c, field.one()),
                        }
                    };
                    match (lhs.is_zero(), rhs.is_zero()) {
                        (true, true) => {}
                        (false, false) => sys.push(row, lhs.div(&rhs)?),
                        _ => continue 'sigma,
                    }
                }
            }
            match solve_monomial(&sys)? {
                MonomialSolution::Unsolvable { kernel, .. } => out.unsolvable.push((phi.clone(), sigma, kernel)),
                MonomialSolution::Solvable { witness } => out.found.push(IsoTriple {
                    phi: phi.clone(),
                    sigma,
                    s: witness,
                }),
            }
        }
    }
    Ok(out)
}

enum Proportional {
    BothZero,
    No,
    Factor(CycScalar),
}

/// c with x = c y.
fn proportionality(x: &GroupAlgElem, y: &GroupAlgElem) -> Proportional {
    match (x.is_zero(), y.is_zero()) {
        (true, true) => return Proportional::BothZero,
        (false, false) => {}
        _ => return Proportional::No,
    }
    let (g, yg) = y.terms.iter().next().unwrap();
    let Some(xg) = x.coeff(g) else { return Proportional::No };
    let c = xg.div(yg).expect("nonzero coefficient");
    if y.scale(&c) == *x {
        Proportional::Factor(c)
    } else {
        Proportional::No
    }
}

/// One named check of the map F(x'_i) = s_i x_sigma(i), F(g') = phi(g').
#[derive(Clone, Debug)]
pub struct SoundnessReport {
    pub checks: Vec<(String, bool)>,
}

impl SoundnessReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }
}

/// Image under F of a polynomial in the source generators.
fn image_of_poly(u: &UAlgebra, p: &BraidedPoly, t: &IsoTriple, s: &[CycScalar]) -> Result<UElem, UError> {
    let target = Arc::new(u.datum.braiding());
    let mut q = BraidedPoly::zero(&target);
    for (w, c) in &p.terms {
        let mut coef = u.field.embed(c).expect("field of the witness contains the datum field");
        for &x in w {
            coef = &coef * &s[x as usize];
        }
        q.add_term(w.iter().map(|&x| t.sigma[x as usize] as u8).collect(), coef);
    }
    u.eval_word_poly(&q)
}

/// Checks the defining relations of the source algebra and the coproducts of its
/// generators under F, computing in the target algebra over the witness field.
pub fn check_soundness(src: &Triple, dst: &Triple, t: &IsoTriple) -> Result<SoundnessReport, IsoError> {
    let w = t.s.as_ref().ok_or(IsoError::NoWitness)?;
    let m = w.field.order();
    let src = src.with_field(m)?;
    let dst = dst.with_field(m)?;
    let (ds, dd) = (&src.datum, &dst.datum);
    let u = UAlgebra::build(dd, &dst.lambda, &dst.mu)?;
    let us = UAlgebra::build(ds, &src.lambda, &src.mu)?;
    let s: Vec<CycScalar> = w.s.iter().map(|x| u.field.embed(x)).collect::<Result<_, _>>()?;
    let theta = ds.theta();
    let mut checks = Vec::new();
    let gen_img: Vec<UElem> = (0..theta).map(|i| u.scale(&u.generator(t.sigma[i]), &s[i])).collect();
    let src_braiding = Arc::new(ds.braiding());

    checks.push(("bijective on group-likes".to_string(), t.phi.is_bijective(&ds.group, &dd.group)));
    checks.push(("dimensions agree".to_string(), u.dimension() == us.dimension()));

    // g x_i g^-1 = chi_i(g) x_i for generators g of the source group.
    let mut ok = true;
    for k in 0..ds.group.rank() {
        let mut coords = vec![0i64; ds.group.rank()];
        coords[k] = 1;
        let g = ds.group.element_from(&coords);
        let fg = u.group_element(&t.phi.apply(&dd.group, &g));
        let fg_inv = u.group_element(&dd.group.inv(&t.phi.apply(&dd.group, &g)));
        for (i, xi) in gen_img.iter().enumerate() {
            let lhs = u.mul(&u.mul(&fg, xi)?, &fg_inv)?;
            let c = ds.group.char_eval(&ds.chi[i], &g, &u.field);
            ok &= lhs == u.scale(xi, &c);
        }
    }
    checks.push(("group action".to_string(), ok));

    let mut ok = true;
    for i in 0..theta {
        for j in 0..theta {
            if i != j && ds.same_component(i, j) {
                let serre = crate::braided::serre_element(&src_braiding, i, j, ds.cartan[i][j]);
                ok &= image_of_poly(&u, &serre, t, &s)?.is_empty();
            }
        }
    }
    checks.push(("Serre relations".to_string(), ok));

    let mut ok = true;
    for i in 0..theta {
        for j in i + 1..theta {
            if ds.same_component(i, j) {
                continue;
            }
            let lhs = u.sub(
                &u.mul(&gen_img[i], &gen_img[j])?,
                &u.scale(&u.mul(&gen_img[j], &gen_img[i])?, &ds.q(i, j)),
            );
            let lam = src.lambda.get(i, j).cloned().unwrap_or_else(|| u.field.zero());
            let gij = dd.group.mul(&dd.g[t.sigma[i]], &dd.g[t.sigma[j]]);
            let rhs = u.scale(&u.sub(&u.one(), &u.group_element(&gij)), &lam);
            ok &= lhs == rhs;
        }
    }
    checks.push(("linking relations".to_string(), ok));

    let mut ok = true;
    for l in 0..us.num_roots() {
        let x = image_of_poly(&u, us.root_word(l), t, &s)?;
        let mut acc = u.one();
        for _ in 0..ds.root_order(l) {
            acc = u.mul(&acc, &x)?;
        }
        ok &= acc == u.from_group_alg(&us.u_root[l].map_hom(&t.phi, &dd.group));
    }
    checks.push(("root vector relations".to_string(), ok));

    let mut ok = true;
    for (i, xi) in gen_img.iter().enumerate() {
        let lhs = u.coproduct(xi)?;
        let gi = u.group_element(&t.phi.apply(&dd.group, &ds.g[i]));
        let mut rhs: UTensor = u.tensor(&gi, xi);
        for (k, c) in u.tensor(xi, &u.one()) {
            add_to(&mut rhs, k, c);
        }
        ok &= lhs == rhs;
    }
    checks.push(("coproduct of generators".to_string(), ok));
    Ok(SoundnessReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::validate_datum;
    use crate::groups::AbelianGroup;

    fn field(m: u64) -> Field {
        CyclotomicField::new(m)
    }

    #[test]
    fn inconsistent_products_are_unsolvable() {
        let f = field(11);
        let mut sys = MonomialSystem::new(&f, 2);
        sys.push(vec![1, 1], f.from_i64(4));
        sys.push(vec![1, 1], f.from_i64(5));
        match solve_monomial(&sys).unwrap() {
            MonomialSolution::Unsolvable { kernel, value } => {
                assert_ne!(sys.evaluate_kernel(&kernel).unwrap(), f.one());
                assert_eq!(sys.evaluate_kernel(&kernel).unwrap(), value);
            }
            other => panic!("expected unsolvable, got {other:?}"),
        }
    }

    #[test]
    fn square_root_of_zeta() {
        let f = field(11);
        let mut sys = MonomialSystem::new(&f, 1);
        sys.push(vec![2], f.zeta());
        let MonomialSolution::Solvable { witness: Some(w) } = solve_monomial(&sys).unwrap() else {
            panic!("expected a witness");
        };
        assert_eq!(w.field.order(), 11);
        assert_eq!(w.s[0], f.zeta_pow(6));
    }

    #[test]
    fn empty_system_has_unit_witness() {
        let f = field(5);
        let sys = MonomialSystem::new(&f, 3);
        let MonomialSolution::Solvable { witness: Some(w) } = solve_monomial(&sys).unwrap() else {
            panic!("expected a witness");
        };
        assert!(w.s.iter().all(|x| x.is_one()));
    }

    #[test]
    fn enlarged_field_and_signs() {
        let f = field(11);
        let mut sys = MonomialSystem::new(&f, 2);
        // s_1^11 = zeta_11 needs zeta_121; s_2^2 = -4 needs 2 * zeta_44^11.
        sys.push(vec![11, 0], f.zeta());
        sys.push(vec![0, 2], f.from_i64(-4));
        let MonomialSolution::Solvable { witness: Some(w) } = solve_monomial(&sys).unwrap() else {
            panic!("expected a witness");
        };
        assert!(sys.is_satisfied_by(&w).unwrap());
        let mut sys = MonomialSystem::new(&f, 1);
        sys.push(vec![2], f.from_i64(2));
        assert!(matches!(
            solve_monomial(&sys).unwrap(),
            MonomialSolution::Solvable { witness: None }
        ));
        let mut sys = MonomialSystem::new(&f, 1);
        sys.push(vec![1], f.zero());
        assert_eq!(solve_monomial(&sys).unwrap_err(), IsoError::ZeroConstant(0));
    }

    fn a2_datum(m: u64) -> Datum {
        let g = AbelianGroup::new(vec![m, m]).unwrap();
        validate_datum(
            &g,
            &[g.element_from(&[1, 0]), g.element_from(&[0, 1])],
            &[g.char_from(&[2, m as i64 - 1]), g.char_from(&[m as i64 - 1, 2])],
            &crate::roots::CartanType::A(2).standard_matrix(),
        )
        .unwrap()
    }

    #[test]
    fn identity_automorphism_gives_delta() {
        let d = a2_datum(5);
        for l in 0..3 {
            let t = iso_constants(&d, 0, &[0, 1], l, None).unwrap();
            let mut e = vec![0; 3];
            e[l] = 1;
            assert_eq!(t.len(), 1);
            assert!(t[&e].is_one());
        }
    }

    #[test]
    fn swap_on_simple_root() {
        let d = a2_datum(5);
        let t = iso_constants(&d, 0, &[1, 0], 0, None).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t[&vec![0, 0, 1]].is_one());
    }

    #[test]
    fn identical_triples_contain_identity() {
        let d = a2_datum(5);
        let tr = Triple {
            datum: d.clone(),
            lambda: Lambda::default(),
            mu: Mu::default(),
        };
        let res = find_isomorphisms(&tr, &tr, None).unwrap();
        let id = GroupHom::identity(&d.group);
        let hit = res.found.iter().find(|t| t.phi == id && t.sigma == vec![0, 1]).unwrap();
        assert!(hit.s.as_ref().unwrap().s.iter().all(|x| x.is_one()));
        assert!(check_soundness(&tr, &tr, hit).unwrap().passed());
    }

    #[test]
    fn rank_and_order_preconditions() {
        let g = AbelianGroup::new(vec![3]).unwrap();
        let d3 = validate_datum(&g, &[g.element_from(&[1])], &[g.char_from(&[1])], &vec![vec![2]]).unwrap();
        let t3 = Triple {
            datum: d3,
            lambda: Lambda::default(),
            mu: Mu::default(),
        };
        assert_eq!(
            find_isomorphisms(&t3, &t3, None).unwrap_err(),
            IsoError::OrderHypothesisViolated(1)
        );
        let t2 = Triple {
            datum: a2_datum(5),
            lambda: Lambda::default(),
            mu: Mu::default(),
        };
        assert_eq!(
            find_isomorphisms(&t3, &t2, None).unwrap_err(),
            IsoError::RankMismatch { src: 1, dst: 2 }
        );
    }
}
