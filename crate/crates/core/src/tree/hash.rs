//! Collapsing `#`-labelled chains.
//!
//! A `#`-path is a maximal chain of `#`-labelled nodes, each redundant or
//! dead, every node being the non-blank child of the previous one. A
//! partial reduction collapses one such path: its first node is replaced
//! by the blank tree when the path is infinite or ends in a dead node, and
//! otherwise by the subtree hanging below its last node. Repeating this
//! until no path is left gives the normal form; the projection is the
//! normal form when it has no `#` label left.

use std::collections::{HashSet, VecDeque};

use super::{NodeClass, NodeId, RegularTree, TreeError};
use crate::symbol::{Address, Dir, Symbol};

/// How a `#`-path ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathEnd {
    /// The last node has no non-blank child.
    Dead,
    /// The last node's only non-blank child is not on the path.
    Continues { child: NodeId, dir: Dir },
    /// The path is infinite; after the last listed node it returns to
    /// `nodes[back_to]`.
    Loops { back_to: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashPath {
    /// Address of the first node of the path.
    pub start: Address,
    /// Graph nodes along the path, in order; for an infinite path the
    /// nodes up to the first repetition.
    pub nodes: Vec<NodeId>,
    pub end: PathEnd,
}

impl HashPath {
    pub fn is_infinite(&self) -> bool {
        matches!(self.end, PathEnd::Loops { .. })
    }

    /// Number of nodes for a finite path, `None` for an infinite one.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> Option<usize> {
        (!self.is_infinite()).then_some(self.nodes.len())
    }
}

fn is_link(t: &RegularTree, n: NodeId) -> bool {
    t.label(n).is_hash() && matches!(t.classify(n), NodeClass::Redundant | NodeClass::Dead)
}

fn non_blank_dir(t: &RegularTree, n: NodeId) -> Option<Dir> {
    Dir::BOTH
        .into_iter()
        .find(|&d| !t.label(t.child(n, d)).is_blank())
}

/// Follows the chain of `#` links starting at `n`.
fn follow(t: &RegularTree, n: NodeId) -> (Vec<NodeId>, PathEnd) {
    let mut nodes = vec![n];
    let mut cur = n;
    loop {
        let Some(d) = non_blank_dir(t, cur) else {
            return (nodes, PathEnd::Dead);
        };
        let c = t.child(cur, d);
        if !is_link(t, c) {
            return (nodes, PathEnd::Continues { child: c, dir: d });
        }
        if let Some(i) = nodes.iter().position(|&m| m == c) {
            return (nodes, PathEnd::Loops { back_to: i });
        }
        nodes.push(c);
        cur = c;
    }
}

/// All maximal `#`-paths of `t`.
///
/// The unfolding is explored breadth first. Where several addresses lead
/// to the same graph node in the same position, only the first one is
/// reported, so for tree-shaped inputs every path appears exactly once.
pub fn maximal_hash_paths(t: &RegularTree) -> Vec<HashPath> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    queue.push_back((t.root(), Address::root()));
    while let Some((n, addr)) = queue.pop_front() {
        if t.label(n).is_blank() || !seen.insert(n) {
            continue;
        }
        if is_link(t, n) {
            let (nodes, end) = follow(t, n);
            if let PathEnd::Continues { child, dir } = end {
                let mut a = addr.clone();
                for w in nodes.windows(2) {
                    a.push(non_blank_dir(t, w[0]).expect("link has a child"));
                }
                a.push(dir);
                queue.push_back((child, a));
            }
            out.push(HashPath {
                start: addr,
                nodes,
                end,
            });
        } else {
            for d in Dir::BOTH {
                queue.push_back((t.child(n, d), addr.child(d)));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HashPathError {
    #[error("no maximal #-path starts at {0}")]
    NotMaximal(Address),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Collapses the maximal `#`-path `p` of `t`.
pub fn partial_hash_reduction(t: &RegularTree, p: &HashPath) -> Result<RegularTree, HashPathError> {
    let n = t.node_at(&p.start);
    if !is_link(t, n) || p.nodes.first() != Some(&n) {
        return Err(HashPathError::NotMaximal(p.start.clone()));
    }
    if let Some(parent) = p.start.parent() {
        let pn = t.node_at(&parent);
        if is_link(t, pn) {
            return Err(HashPathError::NotMaximal(p.start.clone()));
        }
    }
    let (nodes, end) = follow(t, n);
    if nodes != p.nodes || end != p.end {
        return Err(HashPathError::NotMaximal(p.start.clone()));
    }
    let replacement = match end {
        PathEnd::Dead | PathEnd::Loops { .. } => RegularTree::blank(),
        PathEnd::Continues { child, .. } => t.rooted_at(child),
    };
    Ok(t.replace(&p.start, &replacement)?)
}

/// The `#`-normal form of `t` together with the address offsets needed
/// to map its nodes back into `t`.
#[derive(Debug, Clone)]
pub struct HashInjection {
    reduced: RegularTree,
    root_skip: Vec<Dir>,
    edge_skip: Vec<[Vec<Dir>; 2]>,
}

impl HashInjection {
    pub fn tree(&self) -> &RegularTree {
        &self.reduced
    }

    /// Original position of the node at `u` of the reduced tree, or `None`
    /// if that node is blank.
    pub fn map(&self, u: &Address) -> Option<Address> {
        let t = &self.reduced;
        let mut out = Address::from_dirs(self.root_skip.clone());
        let mut n = t.root();
        for &d in u.dirs() {
            if t.label(n).is_blank() {
                return None;
            }
            out.push(d);
            out.extend_from(&self.edge_skip[n][d.index()]);
            n = t.child(n, d);
        }
        (!t.label(n).is_blank()).then_some(out)
    }
}

/// Working graph for the exhaustive reduction.
struct Work {
    labels: Vec<Symbol>,
    children: Vec<[NodeId; 2]>,
    skip: Vec<[Vec<Dir>; 2]>,
    root: NodeId,
    root_skip: Vec<Dir>,
    sink: NodeId,
}

impl Work {
    fn new(t: &RegularTree) -> Self {
        let mut labels = t.labels().to_vec();
        let mut children: Vec<[NodeId; 2]> = t.nodes().map(|n| t.children(n)).collect();
        let sink = match t.blank_node() {
            Some(s) => s,
            None => {
                labels.push(Symbol::blank());
                children.push([labels.len() - 1; 2]);
                labels.len() - 1
            }
        };
        let skip = vec![[Vec::new(), Vec::new()]; labels.len()];
        Work {
            labels,
            children,
            skip,
            root: t.root(),
            root_skip: Vec::new(),
            sink,
        }
    }

    fn is_blank(&self, n: NodeId) -> bool {
        self.labels[n].is_blank()
    }

    fn link_dir(&self, n: NodeId) -> Option<Option<Dir>> {
        if !self.labels[n].is_hash() {
            return None;
        }
        let live: Vec<Dir> = Dir::BOTH
            .into_iter()
            .filter(|&d| !self.is_blank(self.children[n][d.index()]))
            .collect();
        match live.len() {
            0 => Some(None),
            1 => Some(Some(live[0])),
            _ => None,
        }
    }

    /// Where a reference to `n` ends up after collapsing the path starting
    /// there, with the address offset walked through.
    fn resolve(&self, n: NodeId) -> (NodeId, Vec<Dir>) {
        let mut offset = Vec::new();
        let mut visited = HashSet::new();
        let mut cur = n;
        loop {
            match self.link_dir(cur) {
                None => return (cur, offset),
                Some(None) => return (self.sink, Vec::new()),
                Some(Some(d)) => {
                    if !visited.insert(cur) {
                        return (self.sink, Vec::new());
                    }
                    offset.push(d);
                    offset.extend_from_slice(&self.skip[cur][d.index()]);
                    cur = self.children[cur][d.index()];
                }
            }
        }
    }

    fn reachable_links(&self) -> bool {
        let mut seen = HashSet::new();
        let mut stack = vec![self.root];
        while let Some(n) = stack.pop() {
            if !seen.insert(n) {
                continue;
            }
            if self.link_dir(n).is_some() {
                return true;
            }
            stack.extend(self.children[n]);
        }
        false
    }

    fn round(&mut self) {
        let (root, off) = self.resolve(self.root);
        let root_skip = if root == self.sink {
            Vec::new()
        } else {
            let mut s = std::mem::take(&mut self.root_skip);
            s.extend(off);
            s
        };
        let mut new_children = self.children.clone();
        let mut new_skip = self.skip.clone();
        for n in 0..self.labels.len() {
            for d in Dir::BOTH {
                let c = self.children[n][d.index()];
                let (target, off) = self.resolve(c);
                new_children[n][d.index()] = target;
                if target == self.sink {
                    new_skip[n][d.index()].clear();
                } else {
                    new_skip[n][d.index()].extend(off);
                }
            }
        }
        self.root = root;
        self.root_skip = root_skip;
        self.children = new_children;
        self.skip = new_skip;
    }
}

/// Collapses every `#`-path, repeatedly, until none is left. The result may
/// still contain `#` labels on nodes that are not part of any path.
pub fn hash_reduction(t: &RegularTree) -> RegularTree {
    reduce(t).reduced
}

fn reduce(t: &RegularTree) -> HashInjection {
    let mut w = Work::new(t);
    while w.reachable_links() {
        w.round();
    }
    let (reduced, map) = RegularTree::from_parts_with_map(w.labels, w.children.clone(), w.root)
        .expect("reduction keeps blank closure");
    let mut edge_skip = vec![[Vec::new(), Vec::new()]; reduced.len()];
    for (old, new) in map.iter().enumerate() {
        if let Some(new) = *new {
            if !reduced.label(new).is_blank() {
                edge_skip[new] = w.skip[old].clone();
            }
        }
    }
    HashInjection {
        reduced,
        root_skip: w.root_skip,
        edge_skip,
    }
}

/// The `#`-projection of `t`, or `None` when the normal form still
/// carries a `#` label.
pub fn hash_projection(t: &RegularTree) -> Option<RegularTree> {
    let r = hash_reduction(t);
    (!r.labels().iter().any(Symbol::is_hash)).then_some(r)
}

/// The projection together with its injection into `t`.
pub fn hash_injection(t: &RegularTree) -> Option<HashInjection> {
    let inj = reduce(t);
    (!inj.reduced.labels().iter().any(Symbol::is_hash)).then_some(inj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{a_leaf, b_leaf, blank, c_pair};
    use crate::tree::tree_from_rows;

    fn addr(s: &str) -> Address {
        s.parse().unwrap()
    }

    fn hash_over(t: &RegularTree) -> RegularTree {
        RegularTree::node("#", t, &blank())
    }

    fn hash_loop() -> RegularTree {
        tree_from_rows([("h", "#", "h", "_"), ("_", "_", "_", "_")]).unwrap()
    }

    /// Shape of the projectable example figure: a root `a` whose left
    /// child starts a finite chain `#,#` over `b`, whose right child is
    /// an infinite `#` chain, and a `#` chain under `b` that ends dead.
    pub(crate) fn figure_b() -> RegularTree {
        tree_from_rows([
            ("r", "a", "h1", "loop"),
            ("h1", "#", "_", "h2"),
            ("h2", "#", "bn", "_"),
            ("bn", "b", "h3", "cn"),
            ("h3", "#", "h4", "_"),
            ("h4", "#", "_", "_"),
            ("cn", "c", "_", "_"),
            ("loop", "#", "loop", "_"),
            ("_", "_", "_", "_"),
        ])
        .unwrap()
    }

    pub(crate) fn figure_c() -> RegularTree {
        tree_from_rows([
            ("r", "a", "bn", "_"),
            ("bn", "b", "_", "cn"),
            ("cn", "c", "_", "_"),
            ("_", "_", "_", "_"),
        ])
        .unwrap()
    }

    #[test]
    fn no_hash_no_paths() {
        assert!(maximal_hash_paths(&c_pair(&a_leaf(), &b_leaf())).is_empty());
    }

    #[test]
    fn single_redundant_hash() {
        let t = hash_over(&a_leaf());
        let paths = maximal_hash_paths(&t);
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].len(), Some(1));
        assert_eq!(paths[0].start, Address::root());
        let r = partial_hash_reduction(&t, &paths[0]).unwrap();
        assert!(r.equivalent(&a_leaf()));
    }

    #[test]
    fn looping_path_collapses_to_blank() {
        let t = hash_loop();
        let paths = maximal_hash_paths(&t);
        assert_eq!(paths.len(), 1);
        assert!(paths[0].is_infinite());
        assert!(partial_hash_reduction(&t, &paths[0]).unwrap().equivalent(&blank()));
    }

    #[test]
    fn dead_hash_collapses_to_blank() {
        let t = RegularTree::leaf("#");
        let paths = maximal_hash_paths(&t);
        assert_eq!(paths[0].end, PathEnd::Dead);
        assert!(partial_hash_reduction(&t, &paths[0]).unwrap().equivalent(&blank()));
    }

    #[test]
    fn non_maximal_path_is_rejected() {
        let t = hash_over(&hash_over(&a_leaf()));
        let inner = HashPath {
            start: addr("0"),
            nodes: vec![t.node_at(&addr("0"))],
            end: PathEnd::Continues {
                child: t.node_at(&addr("00")),
                dir: Dir::Left,
            },
        };
        assert!(partial_hash_reduction(&t, &inner).is_err());
    }

    #[test]
    fn figure_projection_and_injection() {
        let b = figure_b();
        let c = hash_projection(&b).expect("projection defined");
        assert!(c.equivalent(&figure_c()));
        let inj = hash_injection(&b).unwrap();
        assert_eq!(inj.map(&Address::root()), Some(addr("e")));
        assert_eq!(inj.map(&addr("0")), Some(addr("010")));
        assert_eq!(inj.map(&addr("01")), Some(addr("0101")));
        assert_eq!(inj.map(&addr("1")), None);
    }

    #[test]
    fn fully_branching_hash_has_no_projection() {
        let t = c_pair(&a_leaf(), &b_leaf()).map_labels(|l| {
            if l.as_str() == "c" {
                Symbol::hash()
            } else {
                l.clone()
            }
        });
        assert!(hash_projection(&t).is_none());
    }

    #[test]
    fn collapse_to_blank_can_expose_a_new_path() {
        // # over (dead #, a): after the dead child disappears the root is
        // redundant and collapses too
        let t = RegularTree::node("#", &RegularTree::leaf("#"), &a_leaf());
        let p = hash_projection(&t).unwrap();
        assert!(p.equivalent(&a_leaf()));
        let inj = hash_injection(&t).unwrap();
        assert_eq!(inj.map(&Address::root()), Some(addr("1")));
    }

    #[test]
    fn projection_without_hash_is_identity() {
        let t = c_pair(&a_leaf(), &b_leaf());
        assert!(hash_projection(&t).unwrap().equivalent(&t));
        let inj = hash_injection(&t).unwrap();
        for u in t.non_blank_addresses(16) {
            assert_eq!(inj.map(&u), Some(u.clone()));
        }
    }

    #[test]
    fn root_hash_injection() {
        let inj = hash_injection(&hash_over(&a_leaf())).unwrap();
        assert_eq!(inj.map(&Address::root()), Some(addr("0")));
    }
}
