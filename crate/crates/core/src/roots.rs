//! Cartan matrices of finite type, their positive roots and a convex ordering of
//! the positive roots from a reduced word for the longest Weyl group element.
//!
//! Convention: `a[i][j] = <alpha_i^vee, alpha_j>`, so `s_i(alpha_j) = alpha_j - a[i][j] alpha_i`.

use num_rational::Ratio;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("not a generalized Cartan matrix: {0}")]
    NotGeneralizedCartan(String),
    #[error("component {0:?} is not of finite type")]
    NotFiniteType(Vec<usize>),
    #[error("component {0:?} is of finite type but not in standard form")]
    NotStandardForm(Vec<usize>),
}

pub type CartanMatrix = Vec<Vec<i64>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CartanType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanType::A(n) => write!(f, "A{}", n),
            CartanType::B(n) => write!(f, "B{}", n),
            CartanType::C(n) => write!(f, "C{}", n),
            CartanType::D(n) => write!(f, "D{}", n),
            CartanType::E(n) => write!(f, "E{}", n),
            CartanType::F4 => write!(f, "F4"),
            CartanType::G2 => write!(f, "G2"),
        }
    }
}

impl CartanType {
    pub fn rank(&self) -> usize {
        match *self {
            CartanType::A(n) | CartanType::B(n) | CartanType::C(n) | CartanType::D(n) | CartanType::E(n) => n,
            CartanType::F4 => 4,
            CartanType::G2 => 2,
        }
    }

    /// Standard representative with Bourbaki numbering. Rank-2 doubly laced is
    /// labelled B2 and has the short root first.
    pub fn standard_matrix(&self) -> CartanMatrix {
        let n = self.rank();
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let link = |a: &mut CartanMatrix, i: usize, j: usize, aij: i64, aji: i64| {
            a[i][j] = aij;
            a[j][i] = aji;
        };
        match *self {
            CartanType::A(_) => {
                for i in 0..n.saturating_sub(1) {
                    link(&mut a, i, i + 1, -1, -1);
                }
            }
            CartanType::B(2) => link(&mut a, 0, 1, -2, -1),
            CartanType::B(_) => {
                for i in 0..n - 2 {
                    link(&mut a, i, i + 1, -1, -1);
                }
                link(&mut a, n - 2, n - 1, -1, -2);
            }
            CartanType::C(_) => {
                for i in 0..n - 2 {
                    link(&mut a, i, i + 1, -1, -1);
                }
                link(&mut a, n - 2, n - 1, -2, -1);
            }
            CartanType::D(_) => {
                for i in 0..n - 2 {
                    link(&mut a, i, i + 1, -1, -1);
                }
                link(&mut a, n - 3, n - 1, -1, -1);
            }
            CartanType::E(_) => {
                link(&mut a, 0, 2, -1, -1);
                link(&mut a, 1, 3, -1, -1);
                for i in 2..n - 1 {
                    link(&mut a, i, i + 1, -1, -1);
                }
            }
            CartanType::F4 => {
                link(&mut a, 0, 1, -1, -1);
                link(&mut a, 1, 2, -1, -2);
                link(&mut a, 2, 3, -1, -1);
            }
            CartanType::G2 => link(&mut a, 0, 1, -3, -1),
        }
        a
    }

    fn candidates(n: usize) -> Vec<CartanType> {
        let mut v = vec![CartanType::A(n)];
        if n == 2 {
            v.push(CartanType::B(2));
            v.push(CartanType::G2);
        }
        if n >= 3 {
            v.push(CartanType::B(n));
            v.push(CartanType::C(n));
        }
        if n >= 4 {
            v.push(CartanType::D(n));
        }
        if (6..=8).contains(&n) {
            v.push(CartanType::E(n));
        }
        if n == 4 {
            v.push(CartanType::F4);
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub ctype: CartanType,
    /// Global indices, contiguous and increasing.
    pub indices: Vec<usize>,
}

fn check_gcm(a: &CartanMatrix) -> Result<usize, RootError> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(RootError::NotGeneralizedCartan("matrix is not square".into()));
    }
    for i in 0..n {
        if a[i][i] != 2 {
            return Err(RootError::NotGeneralizedCartan(format!("a[{}][{}] != 2", i + 1, i + 1)));
        }
        for j in 0..n {
            if i != j {
                if a[i][j] > 0 {
                    return Err(RootError::NotGeneralizedCartan(format!("a[{}][{}] > 0", i + 1, j + 1)));
                }
                if (a[i][j] == 0) != (a[j][i] == 0) {
                    return Err(RootError::NotGeneralizedCartan(format!(
                        "a[{}][{}] and a[{}][{}] disagree on vanishing",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
    }
    Ok(n)
}

/// Connected components of the Dynkin graph, ordered by smallest index.
pub fn connected_components(a: &CartanMatrix) -> Vec<Vec<usize>> {
    let n = a.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![];
        let mut queue = VecDeque::from([s]);
        seen[s] = true;
        while let Some(i) = queue.pop_front() {
            comp.push(i);
            for j in 0..n {
                if !seen[j] && a[i][j] != 0 {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn submatrix(a: &CartanMatrix, idx: &[usize]) -> CartanMatrix {
    idx.iter().map(|&i| idx.iter().map(|&j| a[i][j]).collect()).collect()
}

/// Integer symmetrizer d with d_i a_ij = d_j a_ji and gcd 1 on a connected matrix.
fn symmetrizer_connected(a: &CartanMatrix) -> Option<Vec<i64>> {
    let n = a.len();
    let mut d: Vec<Option<Ratio<i64>>> = vec![None; n];
    d[0] = Some(Ratio::from_integer(1));
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if i != j && a[i][j] != 0 {
                let dj = d[i].unwrap() * Ratio::new(a[i][j], a[j][i]);
                match d[j] {
                    None => {
                        d[j] = Some(dj);
                        queue.push_back(j);
                    }
                    Some(x) if x != dj => return None,
                    _ => {}
                }
            }
        }
    }
    let d: Vec<Ratio<i64>> = d.into_iter().map(|x| x.unwrap()).collect();
    let l = d.iter().fold(1i64, |acc, x| num_integer::lcm(acc, *x.denom()));
    let ints: Vec<i64> = d.iter().map(|x| (x * l).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x));
    Some(ints.into_iter().map(|x| x / g).collect())
}

fn is_positive_definite(b: &[Vec<Ratio<i128>>]) -> bool {
    let n = b.len();
    let mut m = b.to_vec();
    for k in 0..n {
        if m[k][k] <= Ratio::from_integer(0) {
            return false;
        }
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                let t = f * m[k][j];
                m[i][j] -= t;
            }
        }
    }
    true
}

fn is_finite_type(a: &CartanMatrix) -> bool {
    let Some(d) = symmetrizer_connected(a) else { return false };
    let n = a.len();
    let b: Vec<Vec<Ratio<i128>>> = (0..n)
        .map(|i| (0..n).map(|j| Ratio::from_integer((d[i] * a[i][j]) as i128)).collect())
        .collect();
    is_positive_definite(&b)
}

/// Decomposes a Cartan matrix into standard finite-type components.
pub fn recognize(a: &CartanMatrix) -> Result<Vec<Component>, RootError> {
    check_gcm(a)?;
    let mut out = Vec::new();
    for comp in connected_components(a) {
        let sub = submatrix(a, &comp);
        if !is_finite_type(&sub) {
            return Err(RootError::NotFiniteType(comp.iter().map(|i| i + 1).collect()));
        }
        let contiguous = comp.windows(2).all(|w| w[1] == w[0] + 1);
        let ctype = CartanType::candidates(comp.len())
            .into_iter()
            .find(|t| t.standard_matrix() == sub);
        match (contiguous, ctype) {
            (true, Some(ctype)) => out.push(Component { ctype, indices: comp }),
            _ => return Err(RootError::NotStandardForm(comp.iter().map(|i| i + 1).collect())),
        }
    }
    Ok(out)
}

/// Whether `a` is a generalized Cartan matrix all of whose components are of finite type.
pub fn is_finite_type_matrix(a: &CartanMatrix) -> bool {
    check_gcm(a).is_ok()
        && connected_components(a)
            .iter()
            .all(|c| is_finite_type(&submatrix(a, c)))
}

/// Positive roots (simple-root coordinates) by closure under simple reflections.
pub fn positive_roots_of(a: &CartanMatrix) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(beta) = queue.pop_front() {
        order.push(beta.clone());
        for i in 0..n {
            let pairing: i64 = (0..n).map(|j| a[i][j] * beta[j]).sum();
            let mut r = beta.clone();
            r[i] -= pairing;
            if r.iter().all(|&x| x >= 0) && r.iter().any(|&x| x > 0) && !seen.contains(&r) {
                seen.insert(r.clone());
                queue.push_back(r);
            }
        }
    }
    order.sort_by_key(|r| (r.iter().sum::<i64>(), std::cmp::Reverse(r.clone())));
    order
}

/// Reduced word (0-based) of w0 by greedy descent on rho in fundamental-weight coordinates.
pub fn longest_word(a: &CartanMatrix) -> Vec<usize> {
    let n = a.len();
    let mut lambda = vec![1i64; n];
    let mut word = Vec::new();
    while let Some(i) = (0..n).find(|&i| lambda[i] > 0) {
        let c = lambda[i];
        for k in 0..n {
            lambda[k] -= c * a[k][i];
        }
        word.push(i);
    }
    word
}

fn reflect(a: &CartanMatrix, i: usize, beta: &[i64]) -> Vec<i64> {
    let pairing: i64 = (0..a.len()).map(|j| a[i][j] * beta[j]).sum();
    let mut r = beta.to_vec();
    r[i] -= pairing;
    r
}

/// beta_l = s_(i1) ... s_(i(l-1)) (alpha_(il)) for a reduced word of w0.
pub fn convex_order(a: &CartanMatrix, word: &[usize]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..word.len())
        .map(|l| {
            let mut beta = vec![0; n];
            beta[word[l]] = 1;
            for k in (0..l).rev() {
                beta = reflect(a, word[k], &beta);
            }
            beta
        })
        .collect()
}

/// Positive roots of a standard Cartan matrix, grouped by component, in convex order.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub cartan: CartanMatrix,
    pub components: Vec<Component>,
    /// Global simple-root coordinates, components in order, each in convex order.
    pub roots: Vec<Vec<i64>>,
    pub root_component: Vec<usize>,
    /// Reduced word of w0, 0-based global indices, per component in order.
    pub w0_word: Vec<usize>,
    /// Per component: range of global root indices.
    pub component_roots: Vec<std::ops::Range<usize>>,
    pub symmetrizer: Vec<i64>,
    index: HashMap<Vec<i64>, usize>,
}

impl RootSystem {
    pub fn new(a: &CartanMatrix) -> Result<Self, RootError> {
        let components = recognize(a)?;
        let theta = a.len();
        let mut roots = Vec::new();
        let mut root_component = Vec::new();
        let mut w0_word = Vec::new();
        let mut component_roots = Vec::new();
        let mut symmetrizer = vec![1; theta];
        for (c, comp) in components.iter().enumerate() {
            let sub = submatrix(a, &comp.indices);
            let word = longest_word(&sub);
            let local = convex_order(&sub, &word);
            let start = roots.len();
            for beta in local {
                let mut g = vec![0; theta];
                for (k, &i) in comp.indices.iter().enumerate() {
                    g[i] = beta[k];
                }
                roots.push(g);
                root_component.push(c);
            }
            component_roots.push(start..roots.len());
            w0_word.extend(word.iter().map(|&k| comp.indices[k]));
            let d = symmetrizer_connected(&sub).expect("finite type is symmetrizable");
            for (k, &i) in comp.indices.iter().enumerate() {
                symmetrizer[i] = d[k];
            }
        }
        let index = roots.iter().enumerate().map(|(l, r)| (r.clone(), l)).collect();
        Ok(RootSystem {
            cartan: a.clone(),
            components,
            roots,
            root_component,
            w0_word,
            component_roots,
            symmetrizer,
            index,
        })
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn root_index(&self, beta: &[i64]) -> Option<usize> {
        self.index.get(beta).copied()
    }

    pub fn component_of_vertex(&self, i: usize) -> usize {
        self.components
            .iter()
            .position(|c| c.indices.contains(&i))
            .expect("vertex belongs to a component")
    }

    pub fn same_component(&self, i: usize, j: usize) -> bool {
        self.component_of_vertex(i) == self.component_of_vertex(j)
    }

    pub fn height(beta: &[i64]) -> i64 {
        beta.iter().sum()
    }

    /// Number of ways to write gamma as an unordered sum of positive roots.
    pub fn kostant_partition_count(&self, gamma: &[i64]) -> u64 {
        kostant_partition_count(&self.roots, gamma)
    }
}

/// Number of multisets of `roots` summing to `gamma`.
pub fn kostant_partition_count(roots: &[Vec<i64>], gamma: &[i64]) -> u64 {
    fn go(roots: &[Vec<i64>], k: usize, gamma: &mut Vec<i64>, memo: &mut HashMap<(usize, Vec<i64>), u64>) -> u64 {
        if gamma.iter().all(|&x| x == 0) {
            return 1;
        }
        if k == roots.len() {
            return 0;
        }
        let key = (k, gamma.clone());
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let mut total = go(roots, k + 1, gamma, memo);
        let mut used = 0;
        loop {
            for (g, r) in gamma.iter_mut().zip(&roots[k]) {
                *g -= r;
            }
            used += 1;
            if gamma.iter().any(|&x| x < 0) {
                break;
            }
            total += go(roots, k + 1, gamma, memo);
        }
        for (g, r) in gamma.iter_mut().zip(&roots[k]) {
            *g += r * used;
        }
        memo.insert(key, total);
        total
    }
    if gamma.iter().any(|&x| x < 0) {
        return 0;
    }
    let mut g = gamma.to_vec();
    go(roots, 0, &mut g, &mut HashMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts() {
        let expected = [
            (CartanType::A(1), 1),
            (CartanType::A(2), 3),
            (CartanType::A(3), 6),
            (CartanType::A(4), 10),
            (CartanType::B(2), 4),
            (CartanType::B(3), 9),
            (CartanType::C(3), 9),
            (CartanType::B(4), 16),
            (CartanType::C(4), 16),
            (CartanType::D(4), 12),
            (CartanType::F4, 24),
            (CartanType::G2, 6),
            (CartanType::E(6), 36),
        ];
        for (t, count) in expected {
            let a = t.standard_matrix();
            let rs = RootSystem::new(&a).unwrap();
            assert_eq!(rs.roots.len(), count, "{}", t);
            assert_eq!(rs.w0_word.len(), count, "{}", t);
            assert_eq!(positive_roots_of(&a).len(), count);
            let mut sorted = rs.roots.clone();
            sorted.sort();
            let mut closure = positive_roots_of(&a);
            closure.sort();
            assert_eq!(sorted, closure, "{}", t);
            assert_eq!(rs.components[0].ctype, t);
        }
    }

    #[test]
    fn a2_convex_order() {
        let a = CartanType::A(2).standard_matrix();
        let rs = RootSystem::new(&a).unwrap();
        assert_eq!(rs.w0_word, vec![0, 1, 0]);
        assert_eq!(rs.roots, vec![vec![1, 0], vec![1, 1], vec![0, 1]]);
    }

    #[test]
    fn errors() {
        let affine = vec![vec![2, -2], vec![-2, 2]];
        assert!(matches!(recognize(&affine), Err(RootError::NotFiniteType(_))));
        let bad = vec![vec![2, -1], vec![0, 2]];
        assert!(matches!(recognize(&bad), Err(RootError::NotGeneralizedCartan(_))));
        let swapped_b2 = vec![vec![2, -1], vec![-2, 2]];
        assert!(matches!(recognize(&swapped_b2), Err(RootError::NotStandardForm(_))));
        let interleaved = vec![vec![2, 0, -1], vec![0, 2, 0], vec![-1, 0, 2]];
        assert!(matches!(recognize(&interleaved), Err(RootError::NotStandardForm(_))));
        let a1a1 = vec![vec![2, 0], vec![0, 2]];
        assert_eq!(recognize(&a1a1).unwrap().len(), 2);
    }

    #[test]
    fn kostant_counts_a2() {
        let rs = RootSystem::new(&CartanType::A(2).standard_matrix()).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(rs.kostant_partition_count(&[a, b]), a.min(b) as u64 + 1);
            }
        }
    }

    #[test]
    fn symmetrizers() {
        let rs = RootSystem::new(&CartanType::B(2).standard_matrix()).unwrap();
        assert_eq!(rs.symmetrizer, vec![1, 2]);
        let rs = RootSystem::new(&CartanType::G2.standard_matrix()).unwrap();
        assert_eq!(rs.symmetrizer, vec![1, 3]);
        let rs = RootSystem::new(&CartanType::F4.standard_matrix()).unwrap();
        assert_eq!(rs.symmetrizer, vec![2, 2, 1, 1]);
    }
}
