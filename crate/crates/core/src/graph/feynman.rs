//! Sums over Wick contractions of vertex monomials.
//!
//! Every factor `α⁽ᵃ⁾` of a vertex monomial is a slot with decoration `a`.
//! A contraction scheme is a perfect matching of all slots. A loop at one
//! vertex contributes `self_kernel`; an edge between vertices `i < j` carries a
//! flow `s ≠ 0` (the power of `z_j/z_i`) and contributes `kernel_coeff`.
//! Taking constant terms in every `z_v` forces the flows to balance at each
//! vertex.
//!
//! Matchings are grouped by the multiset of loop decorations and, per vertex
//! pair, the multiset of edge decorations. The flows on the edges of one pair
//! only matter through their sum, so each pair is reduced to a Laurent
//! polynomial in its net flow; the nets are then summed over a spanning forest
//! of the pair graph.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::kernel::{kernel_coeff, self_kernel};
use crate::correlator::{InvariantRecord, Pipeline};
use crate::error::{Error, Result};
use crate::jet::{vertex, JetMonomial};
use crate::series::{QSeries, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub vertex: usize,
    pub decoration: u32,
}

/// One monomial per vertex and a perfect matching of their slots. Edges are
/// stored with the lower vertex first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionScheme {
    pub monomials: Vec<JetMonomial>,
    pub coefficient: Rational,
    pub edges: Vec<(Slot, Slot)>,
}

impl ContractionScheme {
    pub fn vertex_count(&self) -> usize {
        self.monomials.len()
    }

    pub fn cross_edges(&self) -> impl Iterator<Item = &(Slot, Slot)> {
        self.edges.iter().filter(|(x, y)| x.vertex != y.vertex)
    }

    pub fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.vertex_count());
        for (x, y) in &self.edges {
            uf.union(x.vertex, y.vertex);
        }
        uf.components() == 1
    }

    /// Power of `ℏ`: edges, plus the genus of each vertex monomial, minus the
    /// number of vertices.
    pub fn hbar_exponent(&self) -> i64 {
        let g: i64 = self.monomials.iter().map(|m| m.genus() as i64).sum();
        self.edges.len() as i64 + g - self.vertex_count() as i64
    }

    /// `ℏ`-exponent plus one, for connected schemes.
    pub fn genus(&self) -> Option<u32> {
        self.is_connected().then(|| (self.hbar_exponent() + 1) as u32)
    }
}

/// Flows on the cross edges of a scheme, in [`ContractionScheme::cross_edges`]
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowVector(pub Vec<i64>);

impl FlowVector {
    /// Each edge `(i, j)` with flow `s` adds `-s` at `i` and `+s` at `j`.
    pub fn is_conservative(&self, scheme: &ContractionScheme) -> bool {
        let mut net = vec![0i64; scheme.vertex_count()];
        for ((x, y), &s) in scheme.cross_edges().zip(&self.0) {
            net[x.vertex] -= s;
            net[y.vertex] += s;
        }
        net.iter().all(|&n| n == 0)
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }

    fn components(&mut self) -> usize {
        (0..self.0.len()).filter(|&i| self.find(i) == i).count()
    }
}

type VertexTerms = Vec<(JetMonomial, Rational)>;

fn vertex_terms(ks: &[u32]) -> Result<Vec<VertexTerms>> {
    ks.iter()
        .map(|&k| Ok(vertex(k as i32)?.as_poly().terms().map(|(m, c)| (m.clone(), c.clone())).collect()))
        .collect()
}

/// Calls `f` on every tuple of vertex monomials with its coefficient product.
fn for_each_tuple(terms: &[VertexTerms], f: &mut impl FnMut(&[JetMonomial], &Rational)) {
    fn rec(
        terms: &[VertexTerms],
        i: usize,
        picked: &mut Vec<JetMonomial>,
        coeff: &Rational,
        f: &mut impl FnMut(&[JetMonomial], &Rational),
    ) {
        if i == terms.len() {
            f(picked, coeff);
            return;
        }
        for (m, c) in &terms[i] {
            picked.push(m.clone());
            rec(terms, i + 1, picked, &(coeff * c), f);
            picked.pop();
        }
    }
    rec(terms, 0, &mut Vec::new(), &Rational::one(), f);
}

fn slots_of(monomials: &[JetMonomial]) -> Vec<Slot> {
    monomials
        .iter()
        .enumerate()
        .flat_map(|(v, m)| m.indices().iter().map(move |&a| Slot { vertex: v, decoration: a }))
        .collect()
}

/// Calls `f` on every perfect matching of `slots`.
fn for_each_matching(slots: &[Slot], f: &mut impl FnMut(&[(Slot, Slot)])) {
    fn rec(rest: &mut Vec<Slot>, edges: &mut Vec<(Slot, Slot)>, f: &mut impl FnMut(&[(Slot, Slot)])) {
        if rest.is_empty() {
            f(edges);
            return;
        }
        let first = rest.remove(0);
        for i in 0..rest.len() {
            let other = rest.remove(i);
            edges.push(if first.vertex <= other.vertex { (first, other) } else { (other, first) });
            rec(rest, edges, f);
            edges.pop();
            rest.insert(i, other);
        }
        rest.insert(0, first);
    }
    if slots.len() % 2 == 0 {
        rec(&mut slots.to_vec(), &mut Vec::new(), f);
    }
}

/// Every contraction scheme of the insertions, optionally only connected ones.
/// Intended for small inputs; the correlator itself never materializes them.
pub fn contraction_schemes(ks: &[u32], connected_only: bool) -> Result<Vec<ContractionScheme>> {
    let terms = vertex_terms(ks)?;
    let mut out = Vec::new();
    for_each_tuple(&terms, &mut |monos, coeff| {
        let slots = slots_of(monos);
        for_each_matching(&slots, &mut |edges| {
            let s = ContractionScheme { monomials: monos.to_vec(), coefficient: coeff.clone(), edges: edges.to_vec() };
            if !connected_only || s.is_connected() {
                out.push(s);
            }
        });
    });
    Ok(out)
}

/// Value of one scheme by enumerating every flow vector with
/// `1 <= |s| <= flow_bound` on each cross edge. Exponential; a test oracle.
pub fn evaluate_scheme_brute(scheme: &ContractionScheme, order: usize, flow_bound: usize) -> Result<QSeries> {
    let mut value = QSeries::one(order).scale(&scheme.coefficient);
    for (x, y) in scheme.edges.iter().filter(|(x, y)| x.vertex == y.vertex) {
        value = value.checked_mul(&self_kernel(x.decoration, y.decoration, order)?)?;
    }
    let cross: Vec<(Slot, Slot)> = scheme.cross_edges().copied().collect();
    let b = flow_bound as i64;
    let choices: Vec<i64> = (-b..=b).filter(|&s| s != 0).collect();
    let mut total = QSeries::zero(order);
    let mut idx = vec![0usize; cross.len()];
    loop {
        let flows = FlowVector(idx.iter().map(|&i| choices[i]).collect());
        if flows.is_conservative(scheme) {
            let mut term = value.clone();
            for ((x, y), &s) in cross.iter().zip(&flows.0) {
                term = term.checked_mul(&kernel_coeff(x.decoration, y.decoration, s, order)?)?;
            }
            total += &term;
        }
        // odometer
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(total);
            }
            idx[k] += 1;
            if idx[k] < choices.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Matchings grouped up to relabelling of slots within a vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Pattern {
    genus: i64,
    loops: Vec<(u32, u32)>,
    // (i, j) with i < j -> sorted (decoration at i, decoration at j)
    pairs: Vec<((usize, usize), Vec<(u32, u32)>)>,
}

fn pattern_of(edges: &[(Slot, Slot)], hbar: i64) -> Option<Pattern> {
    let mut loops = Vec::new();
    let mut pairs: BTreeMap<(usize, usize), Vec<(u32, u32)>> = BTreeMap::new();
    for (x, y) in edges {
        if x.vertex == y.vertex {
            if (x.decoration + y.decoration) % 2 == 1 {
                return None;
            }
            loops.push((x.decoration.min(y.decoration), x.decoration.max(y.decoration)));
        } else {
            pairs.entry((x.vertex, y.vertex)).or_default().push((x.decoration, y.decoration));
        }
    }
    loops.sort_unstable();
    let pairs = pairs
        .into_iter()
        .map(|(k, mut v)| {
            v.sort_unstable();
            (k, v)
        })
        .collect();
    Some(Pattern { genus: hbar + 1, loops, pairs })
}

/// Laurent polynomial in the net flow of one vertex pair.
type NetPoly = BTreeMap<i64, QSeries>;

fn pair_poly(decorations: &[(u32, u32)], order: usize, flow_bound: usize) -> Result<NetPoly> {
    let b = flow_bound as i64;
    let mut acc: NetPoly = BTreeMap::from([(0, QSeries::one(order))]);
    for &(x, y) in decorations {
        let edge: Vec<(i64, QSeries)> = (-b..=b)
            .filter(|&s| s != 0)
            .map(|s| Ok((s, kernel_coeff(x, y, s, order)?)))
            .filter(|r| !matches!(r, Ok((_, q)) if q.is_zero()))
            .collect::<Result<_>>()?;
        let mut next: NetPoly = BTreeMap::new();
        for (f, p) in &acc {
            for (s, k) in &edge {
                let term = p.checked_mul(k)?;
                match next.entry(f + s) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(term);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => *o.get_mut() += &term,
                }
            }
        }
        next.retain(|_, q| !q.is_zero());
        acc = next;
    }
    Ok(acc)
}

/// Sum over balanced net flows of the product of pair polynomials.
fn balanced_sum(n: usize, pairs: &[((usize, usize), &NetPoly)], order: usize) -> Result<QSeries> {
    // spanning forest of the pair graph by BFS
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, ((i, j), _)) in pairs.iter().enumerate() {
        adj[*i].push(e);
        adj[*j].push(e);
    }
    let mut seen = vec![false; n];
    let mut parent_edge: Vec<Option<usize>> = vec![None; n];
    let mut bfs_order = Vec::new();
    let mut is_tree = vec![false; pairs.len()];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            bfs_order.push(v);
            for &e in &adj[v] {
                let (i, j) = pairs[e].0;
                let w = if i == v { j } else { i };
                if !seen[w] {
                    seen[w] = true;
                    parent_edge[w] = Some(e);
                    is_tree[e] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let free: Vec<usize> = (0..pairs.len()).filter(|&e| !is_tree[e]).collect();
    let supports: Vec<Vec<i64>> = free.iter().map(|&e| pairs[e].1.keys().copied().collect()).collect();
    if supports.iter().any(Vec::is_empty) {
        return Ok(QSeries::zero(order));
    }
    let mut total = QSeries::zero(order);
    let mut idx = vec![0usize; free.len()];
    let mut nets = vec![0i64; pairs.len()];
    loop {
        for (k, &e) in free.iter().enumerate() {
            nets[e] = supports[k][idx[k]];
        }
        // leaves first: fix each tree edge by balance at its child vertex
        let mut ok = true;
        for &v in bfs_order.iter().rev() {
            let Some(pe) = parent_edge[v] else { continue };
            let mut inflow = 0i64;
            for &e in &adj[v] {
                if e != pe {
                    let (i, _) = pairs[e].0;
                    inflow += if i == v { -nets[e] } else { nets[e] };
                }
            }
            let (i, _) = pairs[pe].0;
            // contribution of pe at v must cancel the rest
            nets[pe] = if i == v { inflow } else { -inflow };
            if !pairs[pe].1.contains_key(&nets[pe]) {
                ok = false;
                break;
            }
        }
        if ok {
            let mut term = QSeries::one(order);
            for (e, (_, poly)) in pairs.iter().enumerate() {
                term = term.checked_mul(&poly[&nets[e]])?;
                if term.is_zero() {
                    break;
                }
            }
            total += &term;
        }
        let mut k = 0;
        loop {
            if k == free.len() {
                return Ok(total);
            }
            idx[k] += 1;
            if idx[k] < supports[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Weighted patterns of all matchings (or only connected ones).
fn collect_patterns(ks: &[u32], connected_only: bool) -> Result<BTreeMap<Pattern, Rational>> {
    let terms = vertex_terms(ks)?;
    let n = ks.len();
    let mut tuples: Vec<(Vec<JetMonomial>, Rational)> = Vec::new();
    for_each_tuple(&terms, &mut |m, c| tuples.push((m.to_vec(), c.clone())));
    let partial: Vec<BTreeMap<Pattern, Rational>> = tuples
        .par_iter()
        .map(|(monos, coeff)| {
            let g: i64 = monos.iter().map(|m| m.genus() as i64).sum();
            let mut local: BTreeMap<Pattern, Rational> = BTreeMap::new();
            for_each_matching(&slots_of(monos), &mut |edges| {
                if connected_only {
                    let mut uf = UnionFind::new(n);
                    for (x, y) in edges {
                        uf.union(x.vertex, y.vertex);
                    }
                    if uf.components() != 1 {
                        return;
                    }
                }
                let hbar = edges.len() as i64 + g - n as i64;
                if let Some(p) = pattern_of(edges, hbar) {
                    *local.entry(p).or_insert_with(Rational::zero) += coeff;
                }
            });
            local
        })
        .collect();
    let mut merged: BTreeMap<Pattern, Rational> = BTreeMap::new();
    for local in partial {
        for (p, c) in local {
            *merged.entry(p).or_insert_with(Rational::zero) += c;
        }
    }
    merged.retain(|_, c| !c.is_zero());
    Ok(merged)
}

/// Pattern values summed per genus.
fn evaluate_patterns(
    n: usize,
    patterns: &BTreeMap<Pattern, Rational>,
    order: usize,
    flow_bound: usize,
) -> Result<BTreeMap<i64, QSeries>> {
    let mut keys: Vec<&Vec<(u32, u32)>> = patterns.keys().flat_map(|p| p.pairs.iter().map(|(_, d)| d)).collect();
    keys.sort();
    keys.dedup();
    let polys: HashMap<&Vec<(u32, u32)>, NetPoly> = keys
        .par_iter()
        .map(|&d| Ok((d, pair_poly(d, order, flow_bound)?)))
        .collect::<Result<_>>()?;
    let mut loop_keys: Vec<(u32, u32)> = patterns.keys().flat_map(|p| p.loops.iter().copied()).collect();
    loop_keys.sort_unstable();
    loop_keys.dedup();
    let loops: HashMap<(u32, u32), QSeries> =
        loop_keys.into_iter().map(|(a, b)| Ok(((a, b), self_kernel(a, b, order)?))).collect::<Result<_>>()?;
    let values: Vec<(i64, QSeries)> = patterns
        .par_iter()
        .map(|(p, c)| {
            let mut v = QSeries::one(order).scale(c);
            for l in &p.loops {
                v = v.checked_mul(&loops[l])?;
            }
            if !p.pairs.is_empty() && !v.is_zero() {
                let pairs: Vec<((usize, usize), &NetPoly)> = p.pairs.iter().map(|(ij, d)| (*ij, &polys[d])).collect();
                v = v.checked_mul(&balanced_sum(n, &pairs, order)?)?;
            }
            Ok((p.genus, v))
        })
        .collect::<Result<_>>()?;
    let mut out: BTreeMap<i64, QSeries> = BTreeMap::new();
    for (g, v) in values {
        *out.entry(g).or_insert_with(|| QSeries::zero(order)) += &v;
    }
    Ok(out)
}

fn check_request(ks: &[u32], flow_bound: usize) -> Result<()> {
    if ks.is_empty() {
        return Err(Error::Precondition("at least one insertion is required".into()));
    }
    if flow_bound == 0 {
        return Err(Error::Precondition("flow bound must be positive".into()));
    }
    Ok(())
}

/// Connected correlator by genus, through `q^order`, with flows bounded by
/// `order`. Genera whose series vanishes are omitted.
pub fn bcov_correlator(ks: &[u32], order: usize) -> Result<BTreeMap<u32, InvariantRecord>> {
    bcov_correlator_with(ks, order, order.max(1))
}

pub fn bcov_correlator_with(ks: &[u32], order: usize, flow_bound: usize) -> Result<BTreeMap<u32, InvariantRecord>> {
    check_request(ks, flow_bound)?;
    let patterns = collect_patterns(ks, true)?;
    let by_genus = evaluate_patterns(ks.len(), &patterns, order, flow_bound)?;
    let mut out = BTreeMap::new();
    for (g, series) in by_genus {
        if series.is_zero() {
            continue;
        }
        let g = u32::try_from(g).map_err(|_| Error::Invariant(format!("negative genus {g}")))?;
        out.insert(g, InvariantRecord::new(ks, Some(g), Pipeline::Graph, series));
    }
    Ok(out)
}

/// Connected series summed over genera: the zero series when nothing
/// contributes.
pub fn bcov_connected_series(ks: &[u32], order: usize, flow_bound: usize) -> Result<QSeries> {
    let recs = bcov_correlator_with(ks, order, flow_bound)?;
    let mut total = QSeries::zero(order);
    for r in recs.values() {
        total += &r.series;
    }
    Ok(total)
}

/// Sum over all matchings, connected or not. Equals the normalized
/// disconnected correlator.
pub fn bcov_disconnected(ks: &[u32], order: usize, flow_bound: usize) -> Result<QSeries> {
    check_request(ks, flow_bound)?;
    let patterns = collect_patterns(ks, false)?;
    let by_genus = evaluate_patterns(ks.len(), &patterns, order, flow_bound)?;
    let mut total = QSeries::zero(order);
    for v in by_genus.values() {
        total += v;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rational::{frac, int};

    #[test]
    fn one_point_genus_one() {
        let out = bcov_correlator(&[0], 4).unwrap();
        assert_eq!(out.len(), 1);
        let expect = QSeries::from_coeffs(vec![frac(-1, 24), int(1), int(3), int(4), int(7)]);
        assert_eq!(out[&1].series, expect);
        assert_eq!(out[&1].pipeline, Pipeline::Graph);
    }

    #[test]
    fn odd_slot_count_has_no_support() {
        assert!(bcov_correlator(&[1], 6).unwrap().is_empty());
        assert!(contraction_schemes(&[1], false).unwrap().is_empty());
        assert!(bcov_correlator(&[], 4).is_err());
    }

    #[test]
    fn scheme_counts_and_genus() {
        // vertex(0) = α²/2 twice: 4 slots, 3 matchings, 2 connected
        let all = contraction_schemes(&[0, 0], false).unwrap();
        assert_eq!(all.len(), 3);
        let conn: Vec<_> = all.iter().filter(|s| s.is_connected()).collect();
        assert_eq!(conn.len(), 2);
        assert!(conn.iter().all(|s| s.genus() == Some(1)));
        for ks in [vec![2], vec![1, 1], vec![2, 0, 0]] {
            let g = (ks.iter().sum::<u32>() + 2) / 2;
            for s in contraction_schemes(&ks, true).unwrap() {
                assert_eq!(s.genus(), Some(g), "{ks:?}");
            }
        }
    }

    #[test]
    fn grouped_sum_matches_brute_force() {
        for ks in [vec![0, 0], vec![1, 1], vec![2, 0], vec![0, 0, 0], vec![1, 1, 0]] {
            let order = 4;
            let mut brute = QSeries::zero(order);
            for s in contraction_schemes(&ks, true).unwrap() {
                brute += &evaluate_scheme_brute(&s, order, order).unwrap();
            }
            assert_eq!(bcov_connected_series(&ks, order, order).unwrap(), brute, "{ks:?}");
        }
    }

    #[test]
    fn conservation_check() {
        let s = contraction_schemes(&[0, 0], true).unwrap().remove(0);
        assert_eq!(s.cross_edges().count(), 2);
        assert!(FlowVector(vec![2, -2]).is_conservative(&s));
        assert!(!FlowVector(vec![1, 1]).is_conservative(&s));
    }
}
