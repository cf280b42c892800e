//! Finite-state threads.
//!
//! A thread is stored as an explicit rooted graph whose nodes are
//! termination `S`, inaction `D`, or a postconditional composition
//! `x <| a |> y` (perform `a`, continue with `x` on reply true and `y` on
//! reply false). Every graph is kept garbage-collected and numbered in
//! breadth-first order from the root, so the root is always node 0.
//!
//! Nodes whose action is internal always have equal successors; the
//! constructors reject anything else.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::action::{Action, Internal};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    /// Successful termination.
    Stop,
    /// Inaction.
    Dead,
    /// Postconditional composition.
    Post {
        action: Action,
        on_true: usize,
        on_false: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThreadGraph {
    nodes: Vec<Node>,
    root: usize,
}

impl ThreadGraph {
    /// Validates the node list and garbage-collects everything unreachable
    /// from `root`, renumbering breadth-first.
    pub fn new(nodes: Vec<Node>, root: usize) -> Result<Self> {
        let n = nodes.len();
        if root >= n {
            return Err(Error::InvalidGraph(format!("root {root} out of range")));
        }
        for (i, node) in nodes.iter().enumerate() {
            if let Node::Post {
                action,
                on_true,
                on_false,
            } = node
            {
                if *on_true >= n || *on_false >= n {
                    return Err(Error::InvalidGraph(format!(
                        "node {i} has a successor out of range"
                    )));
                }
                if action.is_internal() && on_true != on_false {
                    return Err(Error::InvalidGraph(format!(
                        "internal action at node {i} must have equal successors"
                    )));
                }
            }
        }
        Ok(Self::collect(&nodes, root))
    }

    fn collect(nodes: &[Node], root: usize) -> Self {
        let mut index = vec![usize::MAX; nodes.len()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([root]);
        index[root] = 0;
        order.push(root);
        while let Some(v) = queue.pop_front() {
            if let Node::Post {
                on_true, on_false, ..
            } = &nodes[v]
            {
                for w in [*on_true, *on_false] {
                    if index[w] == usize::MAX {
                        index[w] = order.len();
                        order.push(w);
                        queue.push_back(w);
                    }
                }
            }
        }
        let nodes = order
            .iter()
            .map(|&v| match &nodes[v] {
                Node::Post {
                    action,
                    on_true,
                    on_false,
                } => Node::Post {
                    action: action.clone(),
                    on_true: index[*on_true],
                    on_false: index[*on_false],
                },
                other => other.clone(),
            })
            .collect();
        ThreadGraph { nodes, root: 0 }
    }

    pub fn stop() -> Self {
        ThreadGraph {
            nodes: vec![Node::Stop],
            root: 0,
        }
    }

    pub fn dead() -> Self {
        ThreadGraph {
            nodes: vec![Node::Dead],
            root: 0,
        }
    }

    /// `on_true <| action |> on_false`. Internal actions need structurally
    /// equal branches.
    pub fn post(action: Action, on_true: &ThreadGraph, on_false: &ThreadGraph) -> Result<Self> {
        if action.is_internal() && on_true != on_false {
            return Err(Error::InvalidGraph(
                "internal action with distinct branches".into(),
            ));
        }
        let mut nodes = Vec::with_capacity(1 + on_true.len() + on_false.len());
        nodes.push(Node::Dead);
        let t = append(&mut nodes, on_true);
        let f = if on_true == on_false {
            t
        } else {
            append(&mut nodes, on_false)
        };
        nodes[0] = Node::Post {
            action,
            on_true: t,
            on_false: f,
        };
        Ok(Self::collect(&nodes, 0))
    }

    /// Action prefixing `a · g`.
    pub fn prefix(action: Action, g: &ThreadGraph) -> Self {
        Self::post(action, g, g).expect("equal branches")
    }

    /// The thread that performs `actions` in order forever, e.g. `a^ω` for
    /// a single action.
    pub fn cycle(actions: &[Action]) -> Self {
        assert!(!actions.is_empty(), "a cycle needs at least one action");
        let k = actions.len();
        let nodes = actions
            .iter()
            .enumerate()
            .map(|(i, a)| Node::Post {
                action: a.clone(),
                on_true: (i + 1) % k,
                on_false: (i + 1) % k,
            })
            .collect::<Vec<_>>();
        Self::collect(&nodes, 0)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The thread rooted at node `i`.
    pub fn subgraph(&self, i: usize) -> Self {
        Self::collect(&self.nodes, i)
    }

    /// Actions occurring anywhere in the graph.
    pub fn actions(&self) -> impl Iterator<Item = &Action> {
        self.nodes.iter().filter_map(|n| match n {
            Node::Post { action, .. } => Some(action),
            _ => None,
        })
    }

    /// Renders the graph as a guarded recursive specification, one equation
    /// per node.
    pub fn equations(&self) -> String {
        let mut out = String::new();
        for (i, node) in self.nodes.iter().enumerate() {
            let rhs = match node {
                Node::Stop => "S".to_string(),
                Node::Dead => "D".to_string(),
                Node::Post {
                    action,
                    on_true,
                    on_false,
                } if on_true == on_false => format!("{action} o X{on_true}"),
                Node::Post {
                    action,
                    on_true,
                    on_false,
                } => format!("X{on_true} <| {action} |> X{on_false}"),
            };
            out.push_str(&format!("X{i} = {rhs}\n"));
        }
        out
    }
}

fn append(nodes: &mut Vec<Node>, g: &ThreadGraph) -> usize {
    let offset = nodes.len();
    nodes.extend(g.nodes.iter().map(|n| shift(n, offset)));
    offset + g.root
}

fn shift(node: &Node, offset: usize) -> Node {
    match node {
        Node::Post {
            action,
            on_true,
            on_false,
        } => Node::Post {
            action: action.clone(),
            on_true: on_true + offset,
            on_false: on_false + offset,
        },
        other => other.clone(),
    }
}

/// Incremental graph construction for the extraction and product
/// algorithms: reserve a slot for a state, fill it in later.
#[derive(Default)]
pub(crate) struct Builder {
    nodes: Vec<Option<Node>>,
}

impl Builder {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn reserve(&mut self) -> usize {
        self.nodes.push(None);
        self.nodes.len() - 1
    }

    pub(crate) fn push(&mut self, node: Node) -> usize {
        self.nodes.push(Some(node));
        self.nodes.len() - 1
    }

    pub(crate) fn set(&mut self, id: usize, node: Node) {
        debug_assert!(self.nodes[id].is_none(), "node {id} set twice");
        self.nodes[id] = Some(node);
    }

    pub(crate) fn finish(self, root: usize) -> ThreadGraph {
        let nodes: Vec<Node> = self
            .nodes
            .into_iter()
            .enumerate()
            .map(|(i, n)| n.unwrap_or_else(|| panic!("node {i} reserved but never set")))
            .collect();
        ThreadGraph::new(nodes, root).expect("builder produced an invalid graph")
    }
}

/// Depth-`depth` approximation: `π_0(x) = D`, `π_{n+1}(S) = S`,
/// `π_{n+1}(D) = D`, `π_{n+1}(x <| a |> y) = π_n(x) <| a |> π_n(y)`.
///
/// The result is a finite acyclic graph; states are shared per
/// `(node, remaining depth)` so its size is at most `|g| · (depth + 1)`.
pub fn project(depth: usize, g: &ThreadGraph) -> ThreadGraph {
    let mut builder = Builder::new();
    let dead = builder.push(Node::Dead);
    let mut memo: HashMap<(usize, usize), usize> = HashMap::new();
    let mut stack = Vec::new();

    let mut state = |v: usize, k: usize, builder: &mut Builder, stack: &mut Vec<_>| {
        if k == 0 {
            return dead;
        }
        *memo.entry((v, k)).or_insert_with(|| {
            let id = builder.reserve();
            stack.push((v, k, id));
            id
        })
    };

    let root = state(g.root, depth, &mut builder, &mut stack);
    while let Some((v, k, id)) = stack.pop() {
        let node = match &g.nodes[v] {
            Node::Stop => Node::Stop,
            Node::Dead => Node::Dead,
            Node::Post {
                action,
                on_true,
                on_false,
            } => Node::Post {
                action: action.clone(),
                on_true: state(*on_true, k - 1, &mut builder, &mut stack),
                on_false: state(*on_false, k - 1, &mut builder, &mut stack),
            },
        };
        builder.set(id, node);
    }
    builder.finish(root)
}

/// Coarsest partition of `nodes` into bisimilar classes, as a block id per
/// node. Signature refinement: split blocks by the blocks of their
/// successors until the number of blocks stops growing.
fn refine(nodes: &[Node]) -> Vec<usize> {
    let mut labels: HashMap<Option<&Action>, usize> = HashMap::new();
    let mut kinds: HashMap<(u8, usize), usize> = HashMap::new();
    let mut block: Vec<usize> = nodes
        .iter()
        .map(|n| {
            let key = match n {
                Node::Stop => (0, 0),
                Node::Dead => (1, 0),
                Node::Post { action, .. } => {
                    let next = labels.len();
                    (2, *labels.entry(Some(action)).or_insert(next))
                }
            };
            let next = kinds.len();
            *kinds.entry(key).or_insert(next)
        })
        .collect();
    let mut count = kinds.len();

    loop {
        let mut signatures: HashMap<(usize, usize, usize), usize> = HashMap::new();
        let next: Vec<usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let key = match n {
                    Node::Post {
                        on_true, on_false, ..
                    } => (block[i], block[*on_true], block[*on_false]),
                    _ => (block[i], usize::MAX, usize::MAX),
                };
                let fresh = signatures.len();
                *signatures.entry(key).or_insert(fresh)
            })
            .collect();
        let next_count = signatures.len();
        block = next;
        if next_count == count {
            return block;
        }
        count = next_count;
    }
}

/// Decides thread equality of two finite-state threads.
pub fn bisimilar(g1: &ThreadGraph, g2: &ThreadGraph) -> bool {
    let mut nodes = g1.nodes.clone();
    let r2 = append(&mut nodes, g2);
    let block = refine(&nodes);
    block[g1.root] == block[r2]
}

/// The bisimulation quotient in canonical numbering: bisimilar graphs have
/// structurally equal minimizations.
pub fn minimize(g: &ThreadGraph) -> ThreadGraph {
    let block = refine(&g.nodes);
    let count = block.iter().copied().max().map_or(0, |m| m + 1);
    let mut quotient: Vec<Option<Node>> = vec![None; count];
    for (i, node) in g.nodes.iter().enumerate() {
        if quotient[block[i]].is_some() {
            continue;
        }
        quotient[block[i]] = Some(match node {
            Node::Post {
                action,
                on_true,
                on_false,
            } => Node::Post {
                action: action.clone(),
                on_true: block[*on_true],
                on_false: block[*on_false],
            },
            other => other.clone(),
        });
    }
    let nodes: Vec<Node> = quotient.into_iter().map(Option::unwrap).collect();
    ThreadGraph::collect(&nodes, block[g.root])
}

/// Conceals the internal action `iota`.
///
/// Chains of `iota` steps are contracted; a node from which `iota` steps
/// alone lead round a cycle can never do anything else and becomes `D`.
pub fn abstract_internal(iota: Internal, g: &ThreadGraph) -> ThreadGraph {
    const DIVERGES: usize = usize::MAX;
    let n = g.nodes.len();
    let hidden = |v: usize| match &g.nodes[v] {
        Node::Post {
            action: Action::Internal(i),
            on_true,
            ..
        } if *i == iota => Some(*on_true),
        _ => None,
    };

    // target[v]: the first non-iota node reached from v, or DIVERGES.
    let mut target: Vec<Option<usize>> = vec![None; n];
    let mut on_path = vec![false; n];
    for start in 0..n {
        let mut path = Vec::new();
        let mut cur = start;
        let result = loop {
            if let Some(t) = target[cur] {
                break t;
            }
            match hidden(cur) {
                None => break cur,
                Some(_) if on_path[cur] => break DIVERGES,
                Some(next) => {
                    on_path[cur] = true;
                    path.push(cur);
                    cur = next;
                }
            }
        };
        for v in path {
            on_path[v] = false;
            target[v] = Some(result);
        }
        target[start].get_or_insert(result);
    }

    let divergent = n;
    let resolve = |v: usize| match target[v].expect("resolved above") {
        DIVERGES => divergent,
        t => t,
    };
    let mut nodes: Vec<Node> = g
        .nodes
        .iter()
        .map(|node| match node {
            Node::Post {
                action,
                on_true,
                on_false,
            } if *action != Action::Internal(iota) => Node::Post {
                action: action.clone(),
                on_true: resolve(*on_true),
                on_false: resolve(*on_false),
            },
            Node::Post { .. } => Node::Dead,
            other => other.clone(),
        })
        .collect();
    nodes.push(Node::Dead);
    ThreadGraph::collect(&nodes, resolve(g.root))
}

impl fmt::Display for ThreadGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, node) in self.nodes.iter().enumerate() {
            match node {
                Node::Stop => writeln!(f, "{i}: S")?,
                Node::Dead => writeln!(f, "{i}: D")?,
                Node::Post {
                    action,
                    on_true,
                    on_false,
                } => writeln!(f, "{i}: {action} -> {on_true}, {on_false}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for ThreadGraph {
    type Err = Error;

    /// Reads the one-node-per-line text form; node ids are arbitrary
    /// naturals and the root is id 0.
    fn from_str(s: &str) -> Result<Self> {
        enum Raw {
            Stop,
            Dead,
            Post(Action, usize, usize),
        }
        let bad = |line: &str| Error::InvalidGraph(format!("malformed line `{line}`"));
        let mut raw: Vec<(usize, Raw)> = Vec::new();
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (id, rest) = line.split_once(':').ok_or_else(|| bad(line))?;
            let id: usize = id.trim().parse().map_err(|_| bad(line))?;
            let rest = rest.trim();
            let node = match rest {
                "S" => Raw::Stop,
                "D" => Raw::Dead,
                _ => {
                    let (action, succ) = rest.rsplit_once("->").ok_or_else(|| bad(line))?;
                    let (t, f) = succ.split_once(',').ok_or_else(|| bad(line))?;
                    Raw::Post(
                        action.trim().parse()?,
                        t.trim().parse().map_err(|_| bad(line))?,
                        f.trim().parse().map_err(|_| bad(line))?,
                    )
                }
            };
            raw.push((id, node));
        }
        let mut index = HashMap::new();
        for (i, (id, _)) in raw.iter().enumerate() {
            if index.insert(*id, i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate node id {id}")));
            }
        }
        let lookup = |id: usize| {
            index
                .get(&id)
                .copied()
                .ok_or_else(|| Error::InvalidGraph(format!("unknown node id {id}")))
        };
        let nodes = raw
            .iter()
            .map(|(_, r)| {
                Ok(match r {
                    Raw::Stop => Node::Stop,
                    Raw::Dead => Node::Dead,
                    Raw::Post(a, t, f) => Node::Post {
                        action: a.clone(),
                        on_true: lookup(*t)?,
                        on_false: lookup(*f)?,
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ThreadGraph::new(nodes, lookup(0)?)
    }
}
