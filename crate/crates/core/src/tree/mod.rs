//! Regular binary labelled trees.
//!
//! An infinite binary tree with finitely many distinct subtrees is stored
//! as a finite rooted graph: every node has a label and exactly two
//! successors. The denoted tree is obtained by unfolding the graph from the
//! root. All blank nodes are merged into a single self-looping sink, so a
//! blank label is always followed by blank labels.

mod hash;

pub use hash::{
    hash_injection, hash_projection, hash_reduction, maximal_hash_paths, partial_hash_reduction,
    HashInjection, HashPath, PathEnd,
};

use std::collections::{HashMap, HashSet, VecDeque};

use crate::symbol::{Address, Dir, Symbol};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("node index {0} out of range")]
    NodeOutOfRange(usize),
    #[error("blank node {0} has a non-blank child")]
    BlankClosure(usize),
    #[error("cannot place a non-blank subtree below the blank node at {0}")]
    BelowBlank(Address),
    #[error("tree has no nodes")]
    Empty,
    #[error("the non-blank part of the tree is not finite")]
    NotFinite,
    #[error("invalid context hole at {0}: {1}")]
    BadHole(Address, &'static str),
}

/// Degree classification of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeClass {
    FullyBranching,
    Redundant,
    Dead,
    Blank,
}

#[derive(Clone, Debug)]
pub struct RegularTree {
    labels: Vec<Symbol>,
    children: Vec<[NodeId; 2]>,
    root: NodeId,
}

impl RegularTree {
    /// Builds a tree from raw graph parts.
    ///
    /// Unreachable nodes are dropped, all blank nodes are merged into one
    /// sink and the remaining nodes are renumbered in breadth-first order.
    pub fn from_parts(
        labels: Vec<Symbol>,
        children: Vec<[NodeId; 2]>,
        root: NodeId,
    ) -> Result<Self, TreeError> {
        Self::from_parts_with_map(labels, children, root).map(|(t, _)| t)
    }

    /// Like [`RegularTree::from_parts`], also returning the old-to-new node map.
    pub fn from_parts_with_map(
        labels: Vec<Symbol>,
        children: Vec<[NodeId; 2]>,
        root: NodeId,
    ) -> Result<(Self, Vec<Option<NodeId>>), TreeError> {
        let n = labels.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if children.len() != n {
            return Err(TreeError::NodeOutOfRange(children.len().min(n)));
        }
        if root >= n {
            return Err(TreeError::NodeOutOfRange(root));
        }
        for (i, ch) in children.iter().enumerate() {
            for &c in ch {
                if c >= n {
                    return Err(TreeError::NodeOutOfRange(c));
                }
            }
            if labels[i].is_blank() && ch.iter().any(|&c| !labels[c].is_blank()) {
                return Err(TreeError::BlankClosure(i));
            }
        }

        let mut map: Vec<Option<NodeId>> = vec![None; n];
        let mut new_labels = Vec::new();
        let mut new_children: Vec<[NodeId; 2]> = Vec::new();
        let mut sink: Option<NodeId> = None;
        let mut order = Vec::new();
        let mut queue = VecDeque::new();

        let mut visit = |old: NodeId,
                         map: &mut Vec<Option<NodeId>>,
                         new_labels: &mut Vec<Symbol>,
                         order: &mut Vec<NodeId>,
                         queue: &mut VecDeque<NodeId>|
         -> NodeId {
            if let Some(id) = map[old] {
                return id;
            }
            if labels[old].is_blank() {
                let id = *sink.get_or_insert_with(|| {
                    new_labels.push(Symbol::blank());
                    order.push(usize::MAX);
                    new_labels.len() - 1
                });
                map[old] = Some(id);
                return id;
            }
            let id = new_labels.len();
            new_labels.push(labels[old].clone());
            order.push(old);
            map[old] = Some(id);
            queue.push_back(old);
            id
        };

        let new_root = visit(root, &mut map, &mut new_labels, &mut order, &mut queue);
        while let Some(old) = queue.pop_front() {
            for &c in &children[old] {
                visit(c, &mut map, &mut new_labels, &mut order, &mut queue);
            }
        }
        for (id, &old) in order.iter().enumerate() {
            if old == usize::MAX {
                new_children.push([id, id]);
            } else {
                let [l, r] = children[old];
                new_children.push([map[l].unwrap(), map[r].unwrap()]);
            }
        }
        Ok((
            RegularTree {
                labels: new_labels,
                children: new_children,
                root: new_root,
            },
            map,
        ))
    }

    /// The tree labelled blank everywhere.
    pub fn blank() -> Self {
        RegularTree {
            labels: vec![Symbol::blank()],
            children: vec![[0, 0]],
            root: 0,
        }
    }

    /// A single node labelled `label` whose children are blank.
    pub fn leaf(label: impl Into<Symbol>) -> Self {
        Self::node(label, &Self::blank(), &Self::blank())
    }

    /// A root labelled `label` over copies of `left` and `right`.
    pub fn node(label: impl Into<Symbol>, left: &RegularTree, right: &RegularTree) -> Self {
        let label = label.into();
        if label.is_blank() {
            // blank closure forces the children
            return Self::blank();
        }
        let mut labels = vec![label];
        let mut children = vec![[0, 0]];
        let lo = labels.len();
        labels.extend(left.labels.iter().cloned());
        children.extend(left.children.iter().map(|[a, b]| [a + lo, b + lo]));
        let ro = labels.len();
        labels.extend(right.labels.iter().cloned());
        children.extend(right.children.iter().map(|[a, b]| [a + ro, b + ro]));
        children[0] = [left.root + lo, right.root + ro];
        Self::from_parts(labels, children, 0).expect("well-formed inputs")
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.labels.len()
    }

    pub fn label(&self, n: NodeId) -> &Symbol {
        &self.labels[n]
    }

    pub fn child(&self, n: NodeId, d: Dir) -> NodeId {
        self.children[n][d.index()]
    }

    pub fn children(&self, n: NodeId) -> [NodeId; 2] {
        self.children[n]
    }

    pub fn labels(&self) -> &[Symbol] {
        &self.labels
    }

    /// True if the whole tree is blank.
    pub fn is_blank_tree(&self) -> bool {
        self.labels[self.root].is_blank()
    }

    /// The id of the blank sink, if the tree has blank nodes.
    pub fn blank_node(&self) -> Option<NodeId> {
        self.labels.iter().position(Symbol::is_blank)
    }

    /// The set of labels occurring in the tree.
    pub fn symbols(&self) -> std::collections::BTreeSet<Symbol> {
        self.labels.iter().cloned().collect()
    }

    /// Graph node reached by following `u` from the root.
    pub fn node_at(&self, u: &Address) -> NodeId {
        u.dirs().iter().fold(self.root, |n, &d| self.child(n, d))
    }

    pub fn label_at(&self, u: &Address) -> &Symbol {
        self.label(self.node_at(u))
    }

    /// The subtree rooted at `u`.
    pub fn subtree(&self, u: &Address) -> RegularTree {
        self.rooted_at(self.node_at(u))
    }

    /// The subtree rooted at graph node `n`.
    pub fn rooted_at(&self, n: NodeId) -> RegularTree {
        Self::from_parts(self.labels.clone(), self.children.clone(), n)
            .expect("subgraph of a well-formed tree")
    }

    /// Replaces the subtree at `u` by `s`.
    pub fn replace(&self, u: &Address, s: &RegularTree) -> Result<RegularTree, TreeError> {
        let mut path = Vec::with_capacity(u.len() + 1);
        let mut n = self.root;
        for &d in u.dirs() {
            path.push(n);
            n = self.child(n, d);
        }
        if let Some(i) = path.iter().position(|&p| self.labels[p].is_blank()) {
            if s.is_blank_tree() {
                return Ok(self.clone());
            }
            return Err(TreeError::BelowBlank(Address::from_dirs(u.dirs()[..i].to_vec())));
        }
        let base = self.labels.len();
        let copies = path.len();
        let s_off = base + copies;
        let mut labels = self.labels.clone();
        let mut children = self.children.clone();
        for (i, &p) in path.iter().enumerate() {
            labels.push(self.labels[p].clone());
            let mut ch = self.children[p];
            let d = u.dirs()[i];
            ch[d.index()] = if i + 1 < copies { base + i + 1 } else { s_off + s.root };
            children.push(ch);
        }
        labels.extend(s.labels.iter().cloned());
        children.extend(s.children.iter().map(|[a, b]| [a + s_off, b + s_off]));
        let root = if copies > 0 { base } else { s_off + s.root };
        Self::from_parts(labels, children, root)
    }

    /// Degree classification of graph node `n`.
    pub fn classify(&self, n: NodeId) -> NodeClass {
        if self.labels[n].is_blank() {
            return NodeClass::Blank;
        }
        let degree = self.children[n]
            .iter()
            .filter(|&&c| !self.labels[c].is_blank())
            .count();
        match degree {
            2 => NodeClass::FullyBranching,
            1 => NodeClass::Redundant,
            _ => NodeClass::Dead,
        }
    }

    pub fn classify_node(&self, u: &Address) -> NodeClass {
        self.classify(self.node_at(u))
    }

    /// Denotational equality, decided by bisimulation of the two graphs.
    pub fn equivalent(&self, other: &RegularTree) -> bool {
        let mut seen = HashSet::new();
        let mut stack = vec![(self.root, other.root)];
        while let Some((a, b)) = stack.pop() {
            if !seen.insert((a, b)) {
                continue;
            }
            if self.labels[a] != other.labels[b] {
                return false;
            }
            for d in Dir::BOTH {
                stack.push((self.child(a, d), other.child(b, d)));
            }
        }
        true
    }

    /// True if the non-blank part is acyclic, i.e. the tree has finitely
    /// many non-blank nodes.
    pub fn is_finite(&self) -> bool {
        self.non_blank_depth().is_some()
    }

    /// Height of the non-blank part (0 for the blank tree, 1 for a leaf),
    /// or `None` if it is infinite.
    pub fn non_blank_depth(&self) -> Option<usize> {
        // post-order DFS with cycle detection
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done(usize),
        }
        let mut mark = vec![Mark::New; self.len()];
        let mut stack = vec![(self.root, false)];
        while let Some((n, expanded)) = stack.pop() {
            if self.labels[n].is_blank() {
                mark[n] = Mark::Done(0);
                continue;
            }
            if expanded {
                let h = self.children[n]
                    .iter()
                    .map(|&c| match mark[c] {
                        Mark::Done(h) => h,
                        _ => 0,
                    })
                    .max()
                    .unwrap_or(0);
                mark[n] = Mark::Done(h + 1);
                continue;
            }
            match mark[n] {
                Mark::Done(_) => continue,
                Mark::Active => return None,
                Mark::New => {}
            }
            mark[n] = Mark::Active;
            stack.push((n, true));
            for &c in &self.children[n] {
                match mark[c] {
                    Mark::Active if !self.labels[c].is_blank() => return None,
                    Mark::New => stack.push((c, false)),
                    _ => {}
                }
            }
        }
        match mark[self.root] {
            Mark::Done(h) => Some(h),
            _ => None,
        }
    }

    /// Relabels every node, keeping the shape.
    ///
    /// Blank nodes stay blank; `f` is applied to non-blank labels only and
    /// must not return the blank symbol.
    pub fn map_labels(&self, mut f: impl FnMut(&Symbol) -> Symbol) -> RegularTree {
        let labels = self
            .labels
            .iter()
            .map(|l| if l.is_blank() { l.clone() } else { f(l) })
            .collect();
        Self::from_parts(labels, self.children.clone(), self.root)
            .expect("relabelling preserves the shape")
    }

    /// All addresses of non-blank nodes, in breadth-first order. Only
    /// terminates for finite trees; `limit` bounds the number returned.
    pub fn non_blank_addresses(&self, limit: usize) -> Vec<Address> {
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        if !self.is_blank_tree() {
            queue.push_back((self.root, Address::root()));
        }
        while let Some((n, a)) = queue.pop_front() {
            if out.len() >= limit {
                break;
            }
            for d in Dir::BOTH {
                let c = self.child(n, d);
                if !self.labels[c].is_blank() {
                    queue.push_back((c, a.child(d)));
                }
            }
            out.push(a);
        }
        out
    }
}

/// A tree whose non-blank part is finite.
#[derive(Clone, Debug)]
pub struct FiniteTree(RegularTree);

impl FiniteTree {
    pub fn new(tree: RegularTree) -> Result<Self, TreeError> {
        if tree.is_finite() {
            Ok(FiniteTree(tree))
        } else {
            Err(TreeError::NotFinite)
        }
    }

    pub fn depth(&self) -> usize {
        self.0.non_blank_depth().expect("checked at construction")
    }

    pub fn tree(&self) -> &RegularTree {
        &self.0
    }

    pub fn into_tree(self) -> RegularTree {
        self.0
    }
}

impl std::ops::Deref for FiniteTree {
    type Target = RegularTree;

    fn deref(&self) -> &RegularTree {
        &self.0
    }
}

/// A finite tree with a hole: a non-blank node both of whose subtrees
/// are blank and are to be filled by grafting.
#[derive(Clone, Debug)]
pub struct Context {
    tree: FiniteTree,
    hole: Address,
}

impl Context {
    pub fn new(tree: FiniteTree, hole: Address) -> Result<Self, TreeError> {
        let n = tree.node_at(&hole);
        if tree.label(n).is_blank() {
            return Err(TreeError::BadHole(hole, "hole node is blank"));
        }
        if tree.classify(n) != NodeClass::Dead {
            return Err(TreeError::BadHole(hole, "hole node has a non-blank child"));
        }
        Ok(Context { tree, hole })
    }

    /// Cuts both subtrees below `hole` out of `tree`.
    pub fn cut(tree: &RegularTree, hole: Address) -> Result<Self, TreeError> {
        let blank = RegularTree::blank();
        let t = tree
            .replace(&hole.child(Dir::Left), &blank)?
            .replace(&hole.child(Dir::Right), &blank)?;
        Self::new(FiniteTree::new(t)?, hole)
    }

    pub fn tree(&self) -> &FiniteTree {
        &self.tree
    }

    pub fn hole(&self) -> &Address {
        &self.hole
    }

    /// Fills the hole with `left` and `right`.
    pub fn graft(&self, left: &RegularTree, right: &RegularTree) -> Result<RegularTree, TreeError> {
        self.tree
            .replace(&self.hole.child(Dir::Left), left)?
            .replace(&self.hole.child(Dir::Right), right)
    }
}

/// Builds a tree from `(id, label, left, right)` rows; the first row is
/// the root. Handy for fixtures and the text format.
pub fn tree_from_rows<'a>(
    rows: impl IntoIterator<Item = (&'a str, &'a str, &'a str, &'a str)>,
) -> Result<RegularTree, TreeError> {
    let rows: Vec<_> = rows.into_iter().collect();
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut labels = Vec::new();
    for (id, label, _, _) in &rows {
        index.insert(id, labels.len());
        labels.push(Symbol::new(label));
    }
    let mut children = Vec::new();
    for (i, (_, _, l, r)) in rows.iter().enumerate() {
        let li = *index.get(l).ok_or(TreeError::NodeOutOfRange(i))?;
        let ri = *index.get(r).ok_or(TreeError::NodeOutOfRange(i))?;
        children.push([li, ri]);
    }
    RegularTree::from_parts(labels, children, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    fn addr(s: &str) -> Address {
        s.parse().unwrap()
    }

    #[test]
    fn label_at_examples() {
        assert!(blank().label_at(&addr("0110")).is_blank());
        assert_eq!(a_leaf().label_at(&addr("e")).as_str(), "a");
        assert!(a_leaf().label_at(&addr("0")).is_blank());
    }

    #[test]
    fn subtree_examples() {
        let t = c_pair(&a_leaf(), &b_leaf());
        assert!(t.subtree(&addr("1")).equivalent(&b_leaf()));
        assert!(t.subtree(&Address::root()).equivalent(&t));
        assert!(blank().subtree(&addr("01")).equivalent(&blank()));
    }

    #[test]
    fn replace_examples() {
        let t = c_pair(&a_leaf(), &a_leaf());
        let r = t.replace(&addr("1"), &b_leaf()).unwrap();
        assert!(r.equivalent(&c_pair(&a_leaf(), &b_leaf())));
        let same = t.replace(&addr("0"), &t.subtree(&addr("0"))).unwrap();
        assert!(same.equivalent(&t));
        assert!(matches!(
            blank().replace(&addr("0"), &a_leaf()),
            Err(TreeError::BelowBlank(_))
        ));
    }

    #[test]
    fn replace_on_shared_structure_only_touches_one_address() {
        // both children share the same graph node
        let t = tree_from_rows([("r", "c", "x", "x"), ("x", "a", "_", "_"), ("_", "_", "_", "_")])
            .unwrap();
        let r = t.replace(&addr("0"), &b_leaf()).unwrap();
        assert_eq!(r.label_at(&addr("0")).as_str(), "b");
        assert_eq!(r.label_at(&addr("1")).as_str(), "a");
    }

    #[test]
    fn graft_examples() {
        let c = Context::new(FiniteTree::new(RegularTree::leaf("c")).unwrap(), Address::root())
            .unwrap();
        assert!(c.graft(&a_leaf(), &a_leaf()).unwrap().equivalent(&c_pair(&a_leaf(), &a_leaf())));
        assert!(c.graft(&a_leaf(), &b_leaf()).unwrap().equivalent(&c_pair(&a_leaf(), &b_leaf())));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            c_pair(&a_leaf(), &b_leaf()).classify_node(&Address::root()),
            NodeClass::FullyBranching
        );
        assert_eq!(a_leaf().classify_node(&Address::root()), NodeClass::Dead);
        let t = RegularTree::node("#", &a_leaf(), &blank());
        assert_eq!(t.classify_node(&Address::root()), NodeClass::Redundant);
        assert_eq!(t.classify_node(&addr("1")), NodeClass::Blank);
    }

    #[test]
    fn blank_closure_is_enforced() {
        let err = RegularTree::from_parts(
            vec![Symbol::blank(), Symbol::new("a")],
            vec![[1, 1], [0, 0]],
            0,
        );
        assert_eq!(err.unwrap_err(), TreeError::BlankClosure(0));
    }

    #[test]
    fn blank_nodes_collapse_to_one_sink() {
        let t = tree_from_rows([
            ("r", "c", "b1", "b2"),
            ("b1", "_", "b1", "b2"),
            ("b2", "_", "b2", "b2"),
        ])
        .unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.equivalent(&RegularTree::leaf("c")));
    }

    #[test]
    fn finiteness() {
        assert_eq!(blank().non_blank_depth(), Some(0));
        assert_eq!(a_leaf().non_blank_depth(), Some(1));
        assert_eq!(c_pair(&a_leaf(), &b_leaf()).non_blank_depth(), Some(2));
        let loop_a = tree_from_rows([("r", "a", "r", "r")]).unwrap();
        assert!(!loop_a.is_finite());
        assert!(FiniteTree::new(loop_a).is_err());
    }

    #[test]
    fn context_validation() {
        let t = FiniteTree::new(c_pair(&a_leaf(), &b_leaf())).unwrap();
        assert!(Context::new(t.clone(), Address::root()).is_err());
        assert!(Context::new(t.clone(), addr("0")).is_ok());
        assert!(Context::new(t, addr("00")).is_err());
    }
}
