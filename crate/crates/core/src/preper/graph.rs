//! Finite functional graphs (out-degree one) and their canonical forms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Display, Write};

use crate::error::{Error, Result};
use crate::pcfverify::dot_escape;

/// "Type m_n": the point lands on an m-cycle after exactly n steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeTag {
    pub m: usize,
    pub n: usize,
}

impl Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.m, self.n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalGraph<V: Ord> {
    succ: BTreeMap<V, V>,
}

impl<V: Ord> Default for FunctionalGraph<V> {
    fn default() -> Self {
        FunctionalGraph { succ: BTreeMap::new() }
    }
}

impl<V: Ord + Clone + Display> FunctionalGraph<V> {
    /// Fails unless every edge target is itself a vertex.
    pub fn from_edges(edges: impl IntoIterator<Item = (V, V)>) -> Result<Self> {
        let mut succ = BTreeMap::new();
        for (a, b) in edges {
            if let Some(old) = succ.insert(a.clone(), b.clone()) {
                if old != b {
                    return Err(Error::InvalidParameter(format!("{a} has two successors")));
                }
            }
        }
        for b in succ.values() {
            if !succ.contains_key(b) {
                return Err(Error::InvalidParameter(format!("graph is not closed: {b} has no successor")));
            }
        }
        Ok(FunctionalGraph { succ })
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn contains(&self, v: &V) -> bool {
        self.succ.contains_key(v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &V> {
        self.succ.keys()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&V, &V)> {
        self.succ.iter()
    }

    pub fn successor(&self, v: &V) -> Option<&V> {
        self.succ.get(v)
    }

    fn preimages(&self) -> BTreeMap<&V, Vec<&V>> {
        let mut pre: BTreeMap<&V, Vec<&V>> = self.succ.keys().map(|v| (v, Vec::new())).collect();
        for (a, b) in &self.succ {
            pre.get_mut(b).expect("closed").push(a);
        }
        pre
    }

    /// Vertices lying on cycles.
    pub fn periodic_points(&self) -> BTreeSet<&V> {
        let mut out = BTreeSet::new();
        for v in self.succ.keys() {
            // v is periodic iff it returns to itself within len steps
            let mut z = &self.succ[v];
            for _ in 0..self.succ.len() {
                if z == v {
                    out.insert(v);
                    break;
                }
                z = &self.succ[z];
            }
        }
        out
    }

    /// Each cycle starting at its least vertex, in vertex order.
    pub fn cycles(&self) -> Vec<Vec<&V>> {
        let periodic = self.periodic_points();
        let mut done: BTreeSet<&V> = BTreeSet::new();
        let mut out = Vec::new();
        for v in &periodic {
            if done.contains(v) {
                continue;
            }
            let mut cyc = vec![*v];
            let mut z = &self.succ[*v];
            while z != *v {
                cyc.push(z);
                z = &self.succ[z];
            }
            done.extend(cyc.iter().copied());
            out.push(cyc);
        }
        out
    }

    pub fn type_of(&self, v: &V) -> Result<TypeTag> {
        if !self.contains(v) {
            return Err(Error::AbsentPoint(v.to_string()));
        }
        let periodic = self.periodic_points();
        let mut z = v;
        let mut n = 0;
        while !periodic.contains(z) {
            z = &self.succ[z];
            n += 1;
        }
        let mut m = 1;
        let mut y = &self.succ[z];
        while y != z {
            y = &self.succ[y];
            m += 1;
        }
        Ok(TypeTag { m, n })
    }

    /// Connected components as subgraphs, ordered by their least vertex.
    pub fn components(&self) -> Vec<FunctionalGraph<V>> {
        let mut comp_of: BTreeMap<&V, usize> = BTreeMap::new();
        let cycles = self.cycles();
        for (i, c) in cycles.iter().enumerate() {
            for v in c {
                comp_of.insert(v, i);
            }
        }
        for v in self.succ.keys() {
            let mut path = Vec::new();
            let mut z = v;
            let id = loop {
                if let Some(&i) = comp_of.get(z) {
                    break i;
                }
                path.push(z);
                z = &self.succ[z];
            };
            for p in path {
                comp_of.insert(p, id);
            }
        }
        let mut parts: Vec<BTreeMap<V, V>> = vec![BTreeMap::new(); cycles.len()];
        for (a, b) in &self.succ {
            parts[comp_of[a]].insert(a.clone(), b.clone());
        }
        let mut out: Vec<FunctionalGraph<V>> = parts.into_iter().map(|succ| FunctionalGraph { succ }).collect();
        out.sort_by(|a, b| a.succ.keys().next().cmp(&b.succ.keys().next()));
        out
    }

    /// Label-free encoding: equal strings iff the graphs are isomorphic.
    ///
    /// Trees hanging off cycle vertices are encoded recursively with sorted
    /// children, each cycle by its least rotation, and components sorted.
    pub fn canonical_form(&self) -> String {
        let pre = self.preimages();
        let periodic = self.periodic_points();
        fn enc<V: Ord>(v: &V, pre: &BTreeMap<&V, Vec<&V>>, periodic: &BTreeSet<&V>) -> String {
            let mut kids: Vec<String> = pre[v]
                .iter()
                .filter(|u| !periodic.contains(*u))
                .map(|u| enc(*u, pre, periodic))
                .collect();
            kids.sort();
            format!("({})", kids.concat())
        }
        let mut comps: Vec<String> = self
            .cycles()
            .into_iter()
            .map(|cyc| {
                let codes: Vec<String> = cyc.iter().map(|v| enc(*v, &pre, &periodic)).collect();
                let k = codes.len();
                (0..k)
                    .map(|s| format!("<{}>", (0..k).map(|i| codes[(s + i) % k].as_str()).collect::<String>()))
                    .min()
                    .expect("cycles are nonempty")
            })
            .collect();
        comps.sort();
        comps.concat()
    }

    pub fn is_isomorphic<W: Ord + Clone + Display>(&self, other: &FunctionalGraph<W>) -> bool {
        self.canonical_form() == other.canonical_form()
    }

    /// Cycle lengths, ascending, with multiplicity.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        v.sort_unstable();
        v
    }

    /// Component sizes, ascending.
    pub fn component_sizes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.components().iter().map(|c| c.len()).collect();
        v.sort_unstable();
        v
    }

    /// `P -> Q` lines in vertex order.
    pub fn edge_lines(&self) -> Vec<String> {
        self.succ.iter().map(|(a, b)| format!("{a} -> {b}")).collect()
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{}\" {{", dot_escape(name));
        for v in self.succ.keys() {
            let _ = writeln!(s, "  \"{}\";", dot_escape(&v.to_string()));
        }
        for (a, b) in &self.succ {
            let _ = writeln!(s, "  \"{}\" -> \"{}\";", dot_escape(&a.to_string()), dot_escape(&b.to_string()));
        }
        s.push_str("}\n");
        s
    }

    pub fn map_vertices<W: Ord + Clone + Display>(&self, f: impl Fn(&V) -> W) -> Result<FunctionalGraph<W>> {
        FunctionalGraph::from_edges(self.succ.iter().map(|(a, b)| (f(a), f(b))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(edges: &[(i32, i32)]) -> FunctionalGraph<i32> {
        FunctionalGraph::from_edges(edges.iter().copied()).unwrap()
    }

    #[test]
    fn types_and_cycles() {
        // 0 -> 1 -> 2 -> 1, 3 -> 3, 4 -> 3
        let gr = g(&[(0, 1), (1, 2), (2, 1), (3, 3), (4, 3)]);
        assert_eq!(gr.type_of(&0).unwrap(), TypeTag { m: 2, n: 1 });
        assert_eq!(gr.type_of(&3).unwrap(), TypeTag { m: 1, n: 0 });
        assert_eq!(gr.type_of(&4).unwrap(), TypeTag { m: 1, n: 1 });
        assert!(matches!(gr.type_of(&9), Err(Error::AbsentPoint(_))));
        assert_eq!(gr.cycle_lengths(), [1, 2]);
        assert_eq!(gr.component_sizes(), [2, 3]);
    }

    #[test]
    fn rejects_open_graphs() {
        assert!(FunctionalGraph::from_edges([(1, 2)]).is_err());
        assert!(FunctionalGraph::from_edges([(1, 1), (1, 2), (2, 2)]).is_err());
    }

    #[test]
    fn canonical_form_distinguishes_shapes() {
        let a = g(&[(0, 0), (1, 0), (2, 1)]);
        let b = g(&[(0, 0), (1, 0), (2, 0)]);
        assert!(!a.is_isomorphic(&b));
        let c = g(&[(10, 10), (11, 10), (12, 11)]);
        assert!(a.is_isomorphic(&c));
        // the empty graph has an empty form
        assert_eq!(FunctionalGraph::<i32>::default().canonical_form(), "");
    }

    fn arb_graph() -> impl Strategy<Value = Vec<usize>> {
        (1usize..12).prop_flat_map(|n| prop::collection::vec(0..n, n))
    }

    proptest! {
        #[test]
        fn relabelling_preserves_canonical_form(f in arb_graph(), seed in any::<u64>()) {
            let n = f.len();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            let a = FunctionalGraph::from_edges((0..n).map(|i| (i, f[i]))).unwrap();
            let b = FunctionalGraph::from_edges((0..n).map(|i| (perm[i], perm[f[i]]))).unwrap();
            prop_assert_eq!(a.canonical_form(), b.canonical_form());
            prop_assert_eq!(a.component_sizes().iter().sum::<usize>(), n);
        }
    }
}
