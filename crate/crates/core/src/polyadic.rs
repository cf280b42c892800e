//! Fragment vectors, register-file substitution and the joint extraction of
//! a main instruction stream together with the fragments it switches to.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::action::Action;
use crate::error::{Error, ParseError, Result};
use crate::notations::{
    pglc_to_pga, pgld_to_pga, NotationIndex, PglcInstr, PglcProgram, PgldInstr, PgldProgram,
};
use crate::pga::{post, resolve_jumps, CoreInstr, Instr, InstructionStream};
use crate::syntax::Cursor;
use crate::thread::{Builder, Node, ThreadGraph};

/// A finite partial map from register numbers (from 1) to core
/// instructions. Printed as `1=#2,3=!`; the empty state prints as nothing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegisterFileState(BTreeMap<usize, CoreInstr>);

impl RegisterFileState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, i: usize) -> Option<&CoreInstr> {
        self.0.get(&i)
    }

    /// `σ ⊕ {i ↦ u}`.
    pub fn with(&self, i: usize, u: CoreInstr) -> Self {
        let mut next = self.clone();
        next.0.insert(i, u);
        next
    }

    pub fn set(&mut self, i: usize, u: CoreInstr) {
        self.0.insert(i, u);
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &CoreInstr)> {
        self.0.iter().map(|(i, u)| (*i, u))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }
}

impl FromIterator<(usize, CoreInstr)> for RegisterFileState {
    fn from_iter<T: IntoIterator<Item = (usize, CoreInstr)>>(iter: T) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl fmt::Display for RegisterFileState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (i, u)) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}={u}")?;
        }
        Ok(())
    }
}

impl FromStr for RegisterFileState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut c = Cursor::new(s);
        let mut sigma = RegisterFileState::new();
        c.skip_ws();
        if c.at_end() {
            return Ok(sigma);
        }
        loop {
            let i = c.register()?;
            c.skip_ws();
            c.expect('=')?;
            let u = c.payload()?;
            sigma.set(i, u);
            c.skip_ws();
            if c.eat(',') {
                c.skip_ws();
                continue;
            }
            c.expect_end()?;
            return Ok(sigma);
        }
    }
}

/// One entry of a fragment vector: a polyadic program in a supported
/// notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Fragment {
    C(PglcProgram),
    D(PgldProgram),
}

impl Fragment {
    pub fn notation(&self) -> NotationIndex {
        match self {
            Fragment::C(_) => NotationIndex::C,
            Fragment::D(_) => NotationIndex::D,
        }
    }

    /// The projection to PGA matching the notation.
    pub fn project(&self) -> InstructionStream {
        match self {
            Fragment::C(p) => pglc_to_pga(p).normalize(),
            Fragment::D(p) => pgld_to_pga(p).normalize(),
        }
    }

    /// Register numbers used by `put`/`get` and the payloads of `put`.
    pub(crate) fn registers_and_payloads(&self) -> (Vec<usize>, Vec<CoreInstr>) {
        let mut regs = Vec::new();
        let mut payloads = Vec::new();
        match self {
            Fragment::C(p) => {
                for u in p.instrs() {
                    match u {
                        PglcInstr::Put(i, v) => {
                            regs.push(*i);
                            payloads.push(v.clone());
                        }
                        PglcInstr::Get(i) => regs.push(*i),
                        _ => {}
                    }
                }
            }
            Fragment::D(p) => {
                for u in p.instrs() {
                    match u {
                        PgldInstr::Put(i, v) => {
                            regs.push(*i);
                            payloads.push(v.clone());
                        }
                        PgldInstr::Get(i) => regs.push(*i),
                        _ => {}
                    }
                }
            }
        }
        (regs, payloads)
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fragment::C(p) => write!(f, "C: {p}"),
            Fragment::D(p) => write!(f, "D: {p}"),
        }
    }
}

/// The vector `α` of fragments, indexed from 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FragmentVector {
    entries: Vec<Fragment>,
}

impl FragmentVector {
    pub fn new(entries: Vec<Fragment>) -> Self {
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Fragment] {
        &self.entries
    }

    /// `pg(α, i)`.
    pub fn fragment(&self, i: usize) -> Result<&Fragment> {
        if i == 0 || i > self.entries.len() {
            return Err(Error::FragmentIndex {
                index: i,
                len: self.entries.len(),
            });
        }
        Ok(&self.entries[i - 1])
    }

    /// `pgn(α, i)`.
    pub fn notation(&self, i: usize) -> Result<NotationIndex> {
        Ok(self.fragment(i)?.notation())
    }
}

/// One `<notation>: <program>` line per fragment.
impl fmt::Display for FragmentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Parses a vector file. Blank lines and lines starting with `#` are
/// skipped; parse errors are reported at their position in the file.
impl FromStr for FragmentVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (n, line) in s.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let Some((letter, program)) = line.split_once(':') else {
                return Err(ParseError {
                    line: n + 1,
                    column: 1,
                    token: trimmed.to_string(),
                    message: "expected `<notation>: <program>`".into(),
                }
                .into());
            };
            let notation: NotationIndex = letter.parse()?;
            let relocate = |e: Error| match e {
                Error::Parse(mut p) => {
                    p.column += letter.chars().count() + 1;
                    p.line = n + 1;
                    Error::Parse(p)
                }
                other => other,
            };
            let fragment = match notation {
                NotationIndex::C => Fragment::C(program.parse().map_err(relocate)?),
                NotationIndex::D => Fragment::D(program.parse().map_err(relocate)?),
            };
            entries.push(fragment);
        }
        Ok(FragmentVector { entries })
    }
}

/// `p[σ]`: replaces each `get(i)` with `i` in the domain of `σ`.
pub fn substitute(s: &InstructionStream, sigma: &RegisterFileState) -> InstructionStream {
    s.map(|u| match u {
        Instr::Get(i) => match sigma.get(*i) {
            Some(v) => Instr::Core(v.clone()),
            None => u.clone(),
        },
        _ => u.clone(),
    })
}

/// `prj(pg(α, i))`.
pub fn project_fragment(alpha: &FragmentVector, i: usize) -> Result<InstructionStream> {
    Ok(alpha.fragment(i)?.project())
}

/// No `get` survives substituting `σ` into the projected fragment.
pub fn is_valid(alpha: &FragmentVector, i: usize, sigma: &RegisterFileState) -> Result<bool> {
    let s = project_fragment(alpha, i)?;
    Ok(valid_stream(&s, sigma))
}

fn valid_stream(projected: &InstructionStream, sigma: &RegisterFileState) -> bool {
    projected
        .instrs()
        .all(|u| !matches!(u, Instr::Get(i) if sigma.get(*i).is_none()))
}

/// Joint thread extraction of `main` started with register file `sigma0`.
///
/// States are `(instance, position, σ)`. Instance 0 is `main`; the others
/// are substituted fragments `prj(pg(α,i))[σ]`, created on demand at each
/// switch-over and shared across switches with the same `(i, σ)`.
pub fn extract_polyadic(
    main: &InstructionStream,
    sigma0: &RegisterFileState,
    alpha: &FragmentVector,
) -> ThreadGraph {
    Extractor::new(main, alpha).run(sigma0)
}

struct Extractor<'a> {
    alpha: &'a FragmentVector,
    projected: Vec<InstructionStream>,
    streams: Vec<InstructionStream>,
    instances: HashMap<(usize, RegisterFileState), usize>,
    states: HashMap<(usize, usize, RegisterFileState), usize>,
    builder: Builder,
    work: Vec<(usize, usize, RegisterFileState, usize)>,
    dead: usize,
}

impl<'a> Extractor<'a> {
    fn new(main: &InstructionStream, alpha: &'a FragmentVector) -> Self {
        let mut builder = Builder::new();
        let dead = builder.push(Node::Dead);
        Self {
            alpha,
            projected: alpha.entries.iter().map(Fragment::project).collect(),
            streams: vec![main.clone()],
            instances: HashMap::new(),
            states: HashMap::new(),
            builder,
            work: Vec::new(),
            dead,
        }
    }

    fn state(&mut self, stream: usize, pos: Option<usize>, sigma: &RegisterFileState) -> usize {
        let Some(pos) = pos.and_then(|p| resolve_jumps(&self.streams[stream], p)) else {
            return self.dead;
        };
        let key = (stream, pos, sigma.clone());
        if let Some(&id) = self.states.get(&key) {
            return id;
        }
        let id = self.builder.reserve();
        self.states.insert(key, id);
        self.work.push((stream, pos, sigma.clone(), id));
        id
    }

    fn instance(&mut self, i: usize, sigma: &RegisterFileState) -> Option<usize> {
        if let Some(&s) = self.instances.get(&(i, sigma.clone())) {
            return Some(s);
        }
        let projected = &self.projected[i - 1];
        if !valid_stream(projected, sigma) {
            return None;
        }
        let stream = substitute(projected, sigma);
        self.streams.push(stream);
        let s = self.streams.len() - 1;
        self.instances.insert((i, sigma.clone()), s);
        Some(s)
    }

    fn run(mut self, sigma0: &RegisterFileState) -> ThreadGraph {
        let root = self.state(0, Some(0), sigma0);
        while let Some((stream, pos, sigma, id)) = self.work.pop() {
            let next = self.streams[stream].advance(pos, 1);
            let skip = self.streams[stream].advance(pos, 2);
            let node = match self.streams[stream].at(pos).clone() {
                Instr::Core(CoreInstr::Halt) => Node::Stop,
                Instr::Core(CoreInstr::Plain(a)) => {
                    let n = self.state(stream, next, &sigma);
                    post(&a, n, n)
                }
                Instr::Core(CoreInstr::PosTest(a)) => {
                    let t = self.state(stream, next, &sigma);
                    let f = self.state(stream, skip, &sigma);
                    post(&a, t, f)
                }
                Instr::Core(CoreInstr::NegTest(a)) => {
                    let t = self.state(stream, skip, &sigma);
                    let f = self.state(stream, next, &sigma);
                    post(&a, t, f)
                }
                Instr::Core(CoreInstr::Jump(_)) => unreachable!("jumps are resolved"),
                Instr::Swo(i) if i == 0 || i > self.alpha.len() => Node::Stop,
                Instr::Swo(i) => match self.instance(i, &sigma) {
                    Some(s) => {
                        let n = self.state(s, Some(0), &sigma);
                        internal(Action::GNL, n)
                    }
                    None => Node::Dead,
                },
                Instr::Put(i, v) => {
                    let n = match next {
                        Some(_) => self.state(stream, next, &sigma.with(i, v)),
                        None => self.dead,
                    };
                    internal(Action::TAU, n)
                }
                Instr::Get(_) => Node::Dead,
            };
            self.builder.set(id, node);
        }
        self.builder.finish(root)
    }
}

fn internal(action: Action, next: usize) -> Node {
    Node::Post {
        action,
        on_true: next,
        on_false: next,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::Internal;
    use crate::thread::{abstract_internal, bisimilar, minimize};
    use crate::{extract, PgaTerm};

    fn stream(s: &str) -> InstructionStream {
        s.parse().unwrap()
    }

    fn vector(s: &str) -> FragmentVector {
        s.parse().unwrap()
    }

    fn sigma(s: &str) -> RegisterFileState {
        s.parse().unwrap()
    }

    fn abstracted(g: &ThreadGraph) -> ThreadGraph {
        minimize(&abstract_internal(
            Internal::Tau,
            &abstract_internal(Internal::Gnl, g),
        ))
    }

    fn a_then_stop() -> ThreadGraph {
        ThreadGraph::prefix(Action::basic("a"), &ThreadGraph::stop())
    }

    #[test]
    fn substitute_examples() {
        assert_eq!(
            substitute(&stream("get(1);a"), &sigma("1=#2")),
            stream("#2;a")
        );
        assert_eq!(
            substitute(&stream("get(2)"), &sigma("1=#2")),
            stream("get(2)")
        );
        assert_eq!(
            substitute(&stream("put(1,{#5});get(1)"), &sigma("1=!")),
            stream("put(1,{#5});!")
        );
    }

    #[test]
    fn validity_examples() {
        let alpha = vector("D: get(1);a");
        assert!(is_valid(&alpha, 1, &sigma("1=#1")).unwrap());
        assert!(!is_valid(&alpha, 1, &sigma("")).unwrap());
        let alpha = vector("D: a;get(3)");
        assert!(!is_valid(&alpha, 1, &sigma("1=!,2=!")).unwrap());
        assert_eq!(
            is_valid(&alpha, 2, &sigma("")),
            Err(Error::FragmentIndex { index: 2, len: 1 })
        );
    }

    #[test]
    fn project_fragment_examples() {
        let p = |s: &str| s.parse::<PgaTerm>().unwrap().normalize();
        assert_eq!(
            project_fragment(&vector("D: a;##1"), 1).unwrap(),
            p("(a;#3;!;!)*")
        );
        assert_eq!(
            project_fragment(&vector("D: @1"), 1).unwrap(),
            p("(@1;!;!)*")
        );
        assert_eq!(project_fragment(&vector("C: a;!"), 1).unwrap(), p("a;!"));
    }

    #[test]
    fn extract_polyadic_examples() {
        let g = extract_polyadic(
            &stream("put(1,{#1});@1"),
            &sigma(""),
            &vector("D: get(1);a"),
        );
        assert_eq!(abstracted(&g), a_then_stop());

        let g = extract_polyadic(&stream("@1"), &sigma(""), &vector("D: @1"));
        assert!(bisimilar(
            &g,
            &ThreadGraph::prefix(Action::GNL, &ThreadGraph::cycle(&[Action::GNL]))
        ));
        assert_eq!(abstracted(&g), ThreadGraph::dead());

        let g = extract_polyadic(&stream("@0"), &sigma(""), &vector("D: a"));
        assert_eq!(g, ThreadGraph::stop());
    }

    #[test]
    fn lone_put_and_get() {
        let g = extract_polyadic(
            &stream("put(1,{#1})"),
            &sigma(""),
            &FragmentVector::default(),
        );
        assert_eq!(g, ThreadGraph::prefix(Action::TAU, &ThreadGraph::dead()));
        let g = extract_polyadic(&stream("get(1)"), &sigma("1=!"), &FragmentVector::default());
        assert_eq!(g, ThreadGraph::dead());
    }

    #[test]
    fn invalid_switch_is_inaction() {
        let g = extract_polyadic(&stream("a;@1"), &sigma(""), &vector("D: get(1)"));
        assert_eq!(
            minimize(&g),
            ThreadGraph::prefix(Action::basic("a"), &ThreadGraph::dead())
        );
    }

    #[test]
    fn switch_discards_continuation() {
        let alpha = vector("D: b");
        let with = extract_polyadic(&stream("a;@1;c;d"), &sigma(""), &alpha);
        let without = extract_polyadic(&stream("a;@1"), &sigma(""), &alpha);
        assert!(bisimilar(&with, &without));
    }

    #[test]
    fn plain_main_matches_extract() {
        let s = stream("a;+b;#2;c;(d;#3;e)*");
        let g = extract_polyadic(&s, &sigma(""), &FragmentVector::default());
        assert!(bisimilar(&g, &extract(&s).unwrap()));
    }

    #[test]
    fn sigma_literal_round_trip() {
        let s = sigma(" 3 = ! , 1={#2}");
        assert_eq!(s.to_string(), "1=#2,3=!");
        assert_eq!(sigma(&s.to_string()), s);
        assert!(sigma("").is_empty());
        assert!("0=!".parse::<RegisterFileState>().is_err());
        assert!("1=".parse::<RegisterFileState>().is_err());
    }

    #[test]
    fn vector_file_parsing() {
        let alpha = vector("# fragments\nD: get(1);a;##2\n\nC: a;\\#1\n");
        assert_eq!(alpha.len(), 2);
        assert_eq!(alpha.notation(2).unwrap(), NotationIndex::C);
        assert_eq!(alpha.to_string(), "D: get(1);a;##2\nC: a;\\#1\n");
        assert!(matches!(
            "A: a".parse::<FragmentVector>(),
            Err(Error::UnsupportedNotation(_))
        ));
        match "D: a\nD: a;%".parse::<FragmentVector>() {
            Err(Error::Parse(p)) => assert_eq!((p.line, p.column), (2, 6)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
