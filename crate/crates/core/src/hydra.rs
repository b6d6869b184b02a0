//! The Kirby–Paris hydra game.
//!
//! A hydra is a finite rooted tree; its heads are the leaves other than a bare
//! root. Chopping a head that hangs off the root just removes it. Otherwise,
//! at move `n`, the head's parent (with the head removed) is copied `n` more
//! times onto the head's grandparent. The ordinal measure
//! `ord(node) = ⊕ ω^ord(child)` strictly decreases on every chop, so every
//! strategy wins.
//!
//! Children form a multiset. Nodes store them in a canonical order (by their
//! parenthesis notation, descending) with identical subtrees merged into a
//! count, so regrowing `n` copies costs one counter update rather than `n`
//! tree copies. [`HeadPath`] indices refer to the expanded canonical order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordinal::Ordinal;

/// Default cap on the number of nodes a hydra may grow to.
pub const DEFAULT_MAX_NODES: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HydraError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("invalid path {path:?}: {reason}")]
    InvalidPath { path: Vec<usize>, reason: String },
    #[error("not a head")]
    NotAHead,
    #[error("the hydra has no heads left")]
    NoHeads,
    #[error("hydra would grow to {nodes} nodes, above the limit of {limit}")]
    TooLarge { nodes: u64, limit: u64 },
    #[error("ordinal did not decrease: {before} -> {after}")]
    DescentViolation { before: Ordinal, after: Ordinal },
}

/// Child indices from the root to a head, in canonical child order.
pub type HeadPath = Vec<usize>;

#[derive(Debug)]
struct Node {
    /// Canonical order, identical subtrees merged; counts are ≥ 1.
    children: Vec<(Arc<Node>, u64)>,
    size: u64,
    heads: u64,
    height: u32,
    ord: OnceLock<Ordinal>,
}

impl Node {
    fn leaf() -> Arc<Node> {
        Arc::new(Node::with_children(Vec::new()))
    }

    fn with_children(children: Vec<(Arc<Node>, u64)>) -> Node {
        let mut size = 1u64;
        let mut heads = 0u64;
        let mut height = 0u32;
        for (c, k) in &children {
            size = size.saturating_add(c.size.saturating_mul(*k));
            heads = heads.saturating_add(c.heads.saturating_mul(*k));
            height = height.max(c.height + 1);
        }
        Node {
            heads: if children.is_empty() { 1 } else { heads },
            children,
            size,
            height,
            ord: OnceLock::new(),
        }
    }

    /// Canonicalizes an arbitrary list of children.
    fn from_unsorted(mut children: Vec<Arc<Node>>) -> Node {
        children.sort_by(|a, b| notation_cmp(b, a));
        let mut grouped: Vec<(Arc<Node>, u64)> = Vec::new();
        for c in children {
            match grouped.last_mut() {
                Some((g, k)) if notation_cmp(g, &c) == Ordering::Equal => *k += 1,
                _ => grouped.push((c, 1)),
            }
        }
        Node::with_children(grouped)
    }

    fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    fn child_count(&self) -> u64 {
        self.children.iter().map(|(_, k)| *k).sum()
    }

    fn ord(&self) -> &Ordinal {
        self.ord.get_or_init(|| {
            Ordinal::natural_sum_of_monomials(
                self.children
                    .iter()
                    .map(|(c, k)| (c.ord().clone(), BigUint::from(*k))),
            )
        })
    }

    /// Group index and the offset of its first copy for an expanded index.
    fn locate(&self, index: usize) -> Option<(usize, u64)> {
        let mut start = 0u64;
        for (g, (_, k)) in self.children.iter().enumerate() {
            if (index as u64) < start + k {
                return Some((g, start));
            }
            start += k;
        }
        None
    }

    fn write(&self, out: &mut String) {
        out.push('(');
        for (c, k) in &self.children {
            for _ in 0..*k {
                c.write(out);
            }
        }
        out.push(')');
    }
}

/// Order of the parenthesis notations, computed structurally.
///
/// Each child's notation is balanced and closes only at its end, so two
/// child sequences compare child by child; when one runs out first, its `)`
/// meets the other's `(` and it sorts later.
fn notation_cmp(a: &Node, b: &Node) -> Ordering {
    if std::ptr::eq(a, b) {
        return Ordering::Equal;
    }
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.children.get(i), b.children.get(j)) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Greater,
            (Some(_), None) => return Ordering::Less,
            (Some((ca, ka)), Some((cb, kb))) => {
                let c = notation_cmp(ca, cb);
                if c != Ordering::Equal {
                    return c;
                }
                match ka.cmp(kb) {
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                    }
                    // `a` moves on to a smaller child (or ends) while `b`
                    // repeats the current one.
                    Ordering::Less => {
                        return if i + 1 < a.children.len() {
                            Ordering::Less
                        } else {
                            Ordering::Greater
                        };
                    }
                    Ordering::Greater => {
                        return if j + 1 < b.children.len() {
                            Ordering::Greater
                        } else {
                            Ordering::Less
                        };
                    }
                }
            }
        }
    }
}

/// Removes one copy of group `g`.
fn remove_one(children: &[(Arc<Node>, u64)], g: usize) -> Vec<(Arc<Node>, u64)> {
    let mut out = children.to_vec();
    if out[g].1 == 1 {
        out.remove(g);
    } else {
        out[g].1 -= 1;
    }
    out
}

/// Adds `count` copies of `child`, keeping canonical order.
fn insert(children: &mut Vec<(Arc<Node>, u64)>, child: Arc<Node>, count: u64) {
    match children.binary_search_by(|(c, _)| notation_cmp(&child, c)) {
        Ok(g) => children[g].1 = children[g].1.saturating_add(count),
        Err(g) => children.insert(g, (child, count)),
    }
}

/// A hydra together with the number of the upcoming move.
#[derive(Debug, Clone)]
pub struct Hydra {
    root: Arc<Node>,
    move_counter: u64,
}

impl PartialEq for Hydra {
    fn eq(&self, other: &Self) -> bool {
        self.move_counter == other.move_counter
            && notation_cmp(&self.root, &other.root) == Ordering::Equal
    }
}

impl Eq for Hydra {}

impl Hydra {
    /// A hydra that is only a root.
    pub fn bare() -> Self {
        Hydra {
            root: Node::leaf(),
            move_counter: 1,
        }
    }

    /// Parses the parenthesis notation; the move counter starts at 1.
    pub fn parse(text: &str) -> Result<Self, HydraError> {
        let mut p = TreeParser {
            bytes: text.as_bytes(),
            pos: 0,
        };
        let root = p.node()?;
        if p.peek().is_some() {
            return Err(p.error("unexpected input after the root"));
        }
        Ok(Hydra {
            root,
            move_counter: 1,
        })
    }

    pub fn with_move_counter(mut self, move_counter: u64) -> Self {
        self.move_counter = move_counter.max(1);
        self
    }

    /// The number of the next move.
    pub fn move_counter(&self) -> u64 {
        self.move_counter
    }

    pub fn node_count(&self) -> u64 {
        self.root.size
    }

    pub fn head_count(&self) -> u64 {
        if self.root.is_leaf() {
            0
        } else {
            self.root.heads
        }
    }

    /// Longest root-to-leaf path, in edges.
    pub fn depth(&self) -> u32 {
        self.root.height
    }

    /// True once no heads remain.
    pub fn is_won(&self) -> bool {
        self.root.is_leaf()
    }

    /// `ord(leaf) = 0`, `ord(node) = ⊕ ω^ord(child)` (natural sum).
    pub fn ord_of(&self) -> Ordinal {
        self.root.ord().clone()
    }

    /// Whether `path` addresses a head.
    pub fn is_head(&self, path: &[usize]) -> bool {
        self.resolve(path).is_ok_and(|n| n.is_leaf()) && !path.is_empty()
    }

    fn resolve(&self, path: &[usize]) -> Result<&Node, HydraError> {
        let mut node: &Node = &self.root;
        for (depth, &i) in path.iter().enumerate() {
            let (g, _) = node.locate(i).ok_or_else(|| HydraError::InvalidPath {
                path: path.to_vec(),
                reason: format!("no child {i} at depth {depth}"),
            })?;
            node = &node.children[g].0;
        }
        Ok(node)
    }

    /// Every head, in canonical left-to-right order.
    pub fn heads(&self) -> Vec<HeadPath> {
        fn walk(node: &Node, prefix: &mut Vec<usize>, out: &mut Vec<HeadPath>) {
            let mut index = 0usize;
            for (c, k) in &node.children {
                for _ in 0..*k {
                    prefix.push(index);
                    if c.is_leaf() {
                        out.push(prefix.clone());
                    } else {
                        walk(c, prefix, out);
                    }
                    prefix.pop();
                    index += 1;
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut Vec::new(), &mut out);
        out
    }

    /// Chops the head at `path` under [`DEFAULT_MAX_NODES`].
    pub fn chop(&self, path: &[usize]) -> Result<Hydra, HydraError> {
        self.chop_with_limit(path, DEFAULT_MAX_NODES)
    }

    /// Chops the head at `path` and regrows, refusing to exceed `max_nodes`.
    /// The ordinal measure is checked to decrease.
    pub fn chop_with_limit(&self, path: &[usize], max_nodes: u64) -> Result<Hydra, HydraError> {
        if self.is_won() {
            return Err(HydraError::NoHeads);
        }
        if path.is_empty() {
            return Err(HydraError::NotAHead);
        }
        if !self.resolve(path)?.is_leaf() {
            return Err(HydraError::NotAHead);
        }
        let root = chop_at(&self.root, path, self.move_counter);
        if root.size > max_nodes {
            return Err(HydraError::TooLarge {
                nodes: root.size,
                limit: max_nodes,
            });
        }
        let next = Hydra {
            root: Arc::new(root),
            move_counter: self.move_counter + 1,
        };
        let (before, after) = (self.root.ord(), next.root.ord());
        if after >= before {
            return Err(HydraError::DescentViolation {
                before: before.clone(),
                after: after.clone(),
            });
        }
        Ok(next)
    }
}

/// `path` has been validated to end at a leaf.
fn chop_at(node: &Node, path: &[usize], n: u64) -> Node {
    let (g, _) = node.locate(path[0]).expect("validated path");
    let child = &node.children[g].0;
    match path.len() {
        1 => Node::with_children(remove_one(&node.children, g)),
        2 => {
            // `node` is the grandparent, `child` the head's parent.
            let (h, _) = child.locate(path[1]).expect("validated path");
            let maimed = Arc::new(Node::with_children(remove_one(&child.children, h)));
            let mut children = remove_one(&node.children, g);
            insert(&mut children, maimed, n.saturating_add(1));
            Node::with_children(children)
        }
        _ => {
            let replaced = Arc::new(chop_at(child, &path[1..], n));
            let mut children = remove_one(&node.children, g);
            insert(&mut children, replaced, 1);
            Node::with_children(children)
        }
    }
}

impl fmt::Display for Hydra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.root.write(&mut out);
        f.write_str(&out)
    }
}

impl FromStr for Hydra {
    type Err = HydraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Hydra::parse(s)
    }
}

struct TreeParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl TreeParser<'_> {
    fn error(&self, message: &str) -> HydraError {
        HydraError::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn peek(&mut self) -> Option<u8> {
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
        self.bytes.get(self.pos).copied()
    }

    fn node(&mut self) -> Result<Arc<Node>, HydraError> {
        // Iterative so deep inputs cannot overflow the stack.
        let mut stack: Vec<Vec<Arc<Node>>> = Vec::new();
        match self.peek() {
            Some(b'(') => self.pos += 1,
            Some(_) => return Err(self.error("expected '('")),
            None => return Err(self.error("empty input")),
        }
        stack.push(Vec::new());
        loop {
            match self.peek() {
                Some(b'(') => {
                    self.pos += 1;
                    stack.push(Vec::new());
                }
                Some(b')') => {
                    self.pos += 1;
                    let children = stack.pop().expect("open node");
                    let node = Arc::new(Node::from_unsorted(children));
                    match stack.last_mut() {
                        Some(parent) => parent.push(node),
                        None => return Ok(node),
                    }
                }
                Some(_) => return Err(self.error("expected '(' or ')'")),
                None => return Err(self.error("unbalanced parentheses")),
            }
        }
    }
}

/// How Hercules picks the next head.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    /// A head of maximal depth, leftmost among those.
    Deepest,
    /// Uniform over heads, deterministic for a given seed.
    Random(u64),
    /// Replays the listed heads in order.
    Scripted(Vec<HeadPath>),
}

impl FromStr for Strategy {
    type Err = String;

    /// `leftmost`, `rightmost`, `deepest` or `random[:<seed>]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "leftmost" => Ok(Strategy::Leftmost),
            "rightmost" => Ok(Strategy::Rightmost),
            "deepest" => Ok(Strategy::Deepest),
            "random" => Ok(Strategy::Random(0)),
            _ => match s.strip_prefix("random:") {
                Some(seed) => seed
                    .parse()
                    .map(Strategy::Random)
                    .map_err(|_| format!("invalid random seed '{seed}'")),
                None => Err(format!("unknown strategy '{s}'")),
            },
        }
    }
}

struct Chooser {
    strategy: Strategy,
    rng: ChaCha8Rng,
    cursor: usize,
}

impl Chooser {
    fn new(strategy: Strategy) -> Self {
        let seed = match strategy {
            Strategy::Random(seed) => seed,
            _ => 0,
        };
        Chooser {
            strategy,
            rng: ChaCha8Rng::seed_from_u64(seed),
            cursor: 0,
        }
    }

    /// `None` when the hydra is dead or a script has run out.
    fn choose(&mut self, hydra: &Hydra) -> Option<HeadPath> {
        if hydra.is_won() {
            return None;
        }
        let mut path = Vec::new();
        let mut node: &Node = &hydra.root;
        match &self.strategy {
            Strategy::Leftmost => {
                while !node.is_leaf() {
                    path.push(0);
                    node = &node.children[0].0;
                }
            }
            Strategy::Rightmost => {
                while !node.is_leaf() {
                    path.push((node.child_count() - 1) as usize);
                    node = &node.children[node.children.len() - 1].0;
                }
            }
            Strategy::Deepest => {
                let mut start = 0u64;
                while !node.is_leaf() {
                    let target = node.height - 1;
                    for (c, k) in &node.children {
                        if c.height == target {
                            path.push(start as usize);
                            node = c;
                            break;
                        }
                        start += k;
                    }
                    start = 0;
                }
            }
            Strategy::Random(_) => {
                let mut r = self.rng.random_range(0..node.heads);
                while !node.is_leaf() {
                    let mut start = 0u64;
                    for (c, k) in &node.children {
                        let block = c.heads * k;
                        if r < block {
                            path.push((start + r / c.heads) as usize);
                            r %= c.heads;
                            node = c;
                            break;
                        }
                        r -= block;
                        start += k;
                    }
                }
            }
            Strategy::Scripted(script) => {
                let next = script.get(self.cursor)?.clone();
                self.cursor += 1;
                return Some(next);
            }
        }
        Some(path)
    }
}

/// One chop of a recorded game.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub move_number: u64,
    pub path: HeadPath,
    /// Measure after the move.
    pub ordinal: Ordinal,
    /// Node count after the move.
    pub node_count: u64,
}

impl fmt::Display for MoveRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "move {} | head {:?} | nodes {} | {}",
            self.move_number, self.path, self.node_count, self.ordinal
        )
    }
}

/// A finished or interrupted game.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameRecord {
    pub initial_tree: String,
    pub initial_ordinal: Ordinal,
    pub moves: Vec<MoveRecord>,
    pub won: bool,
    #[serde(skip)]
    pub final_hydra: Option<Hydra>,
}

impl GameRecord {
    /// Strict descent along the initial ordinal and every move.
    pub fn strictly_descending(&self) -> bool {
        let mut prev = &self.initial_ordinal;
        for m in &self.moves {
            if m.ordinal >= *prev {
                return false;
            }
            prev = &m.ordinal;
        }
        true
    }

    /// The chosen heads, for replay with [`Strategy::Scripted`].
    pub fn script(&self) -> Vec<HeadPath> {
        self.moves.iter().map(|m| m.path.clone()).collect()
    }
}

/// Plays until the hydra dies or `max_moves` moves have been made.
pub fn play(hydra: &Hydra, strategy: Strategy, max_moves: u64) -> Result<GameRecord, HydraError> {
    play_with_limit(hydra, strategy, max_moves, DEFAULT_MAX_NODES)
}

pub fn play_with_limit(
    hydra: &Hydra,
    strategy: Strategy,
    max_moves: u64,
    max_nodes: u64,
) -> Result<GameRecord, HydraError> {
    let mut chooser = Chooser::new(strategy);
    let mut current = hydra.clone();
    let mut moves = Vec::new();
    while (moves.len() as u64) < max_moves {
        let Some(path) = chooser.choose(&current) else {
            break;
        };
        let next = current.chop_with_limit(&path, max_nodes)?;
        moves.push(MoveRecord {
            move_number: current.move_counter,
            path,
            ordinal: next.ord_of(),
            node_count: next.node_count(),
        });
        current = next;
    }
    Ok(GameRecord {
        initial_tree: hydra.to_string(),
        initial_ordinal: hydra.ord_of(),
        moves,
        won: current.is_won(),
        final_hydra: Some(current),
    })
}
