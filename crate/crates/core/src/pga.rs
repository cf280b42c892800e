//! Program algebra: instructions, terms, their instruction-sequence
//! denotations and thread extraction.
//!
//! A closed term denotes a non-empty sequence that is either finite or
//! eventually periodic. [`InstructionStream`] stores it as a finite prefix
//! followed by an optional repeating period, kept in a canonical form so
//! that two terms are equal exactly when their streams are.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::action::{Action, Basic};
use crate::error::{Error, ParseError, Result};
use crate::syntax::{Cursor, Item};
use crate::thread::{Builder, Node, ThreadGraph};

/// Core primitive instructions.
///
/// The derived order (plain < positive test < negative test < jump < halt,
/// then by operand) is the canonical order used for register-file alphabets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoreInstr {
    Plain(Basic),
    PosTest(Basic),
    NegTest(Basic),
    /// Forward jump `#l`.
    Jump(usize),
    Halt,
}

impl fmt::Display for CoreInstr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreInstr::Plain(b) => write!(f, "{b}"),
            CoreInstr::PosTest(b) => write!(f, "+{b}"),
            CoreInstr::NegTest(b) => write!(f, "-{b}"),
            CoreInstr::Jump(l) => write!(f, "#{l}"),
            CoreInstr::Halt => f.write_str("!"),
        }
    }
}

impl FromStr for CoreInstr {
    type Err = Error;

    /// Accepts a core instruction token, optionally wrapped in braces.
    fn from_str(s: &str) -> Result<Self> {
        let mut c = Cursor::new(s);
        c.skip_ws();
        let braced = c.eat('{');
        c.skip_ws();
        let instr = c.core_instr()?;
        c.skip_ws();
        if braced {
            c.expect('}')?;
            c.skip_ws();
        }
        c.expect_end()?;
        Ok(instr)
    }
}

/// Instructions of program algebra with the supplementary switch-over, put
/// and get instructions. Tests only ever wrap basics, so supplementary
/// instructions can never appear inside a test.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Instr {
    Core(CoreInstr),
    /// Switch-over `@i`.
    Swo(usize),
    /// `put(i,{u})`: store core instruction `u` in register `i`.
    Put(usize, CoreInstr),
    /// `get(i)`: placeholder for the contents of register `i`.
    Get(usize),
}

impl Instr {
    pub fn plain(token: &str) -> Instr {
        Instr::Core(CoreInstr::Plain(
            Basic::new(token).expect("malformed basic literal"),
        ))
    }

    pub fn is_supplementary(&self) -> bool {
        !matches!(self, Instr::Core(_))
    }

    pub fn as_core(&self) -> Option<&CoreInstr> {
        match self {
            Instr::Core(c) => Some(c),
            _ => None,
        }
    }
}

impl From<CoreInstr> for Instr {
    fn from(c: CoreInstr) -> Self {
        Instr::Core(c)
    }
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instr::Core(c) => c.fmt(f),
            Instr::Swo(i) => write!(f, "@{i}"),
            Instr::Put(i, u) => write!(f, "put({i},{{{u}}})"),
            Instr::Get(i) => write!(f, "get({i})"),
        }
    }
}

pub(crate) fn pga_item(c: &Cursor<'_>, at: usize, item: Item) -> Result<Instr, ParseError> {
    Ok(match item {
        Item::Plain(b) => Instr::Core(CoreInstr::Plain(b)),
        Item::PosTest(b) => Instr::Core(CoreInstr::PosTest(b)),
        Item::NegTest(b) => Instr::Core(CoreInstr::NegTest(b)),
        Item::Fwd(l) => Instr::Core(CoreInstr::Jump(l)),
        Item::Halt => Instr::Core(CoreInstr::Halt),
        Item::Swo(i) => Instr::Swo(i),
        Item::Put(i, u) => Instr::Put(i, u),
        Item::Get(i) => Instr::Get(i),
        Item::Abs(_) | Item::Back(_) => {
            return Err(c.error_at(at, "jump form not available in PGA"))
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PgaTerm {
    Instr(Instr),
    Concat(Box<PgaTerm>, Box<PgaTerm>),
    Repeat(Box<PgaTerm>),
}

impl PgaTerm {
    pub fn concat(left: PgaTerm, right: PgaTerm) -> PgaTerm {
        PgaTerm::Concat(Box::new(left), Box::new(right))
    }

    pub fn repeat(body: PgaTerm) -> PgaTerm {
        PgaTerm::Repeat(Box::new(body))
    }

    /// Left-nested concatenation of a non-empty instruction list.
    pub fn from_instrs(instrs: impl IntoIterator<Item = Instr>) -> Option<PgaTerm> {
        instrs
            .into_iter()
            .map(PgaTerm::Instr)
            .reduce(PgaTerm::concat)
    }

    pub fn normalize(&self) -> InstructionStream {
        normalize(self)
    }

    fn parse_term(c: &mut Cursor<'_>) -> Result<PgaTerm, ParseError> {
        let mut term = Self::parse_factor(c)?;
        loop {
            c.skip_ws();
            if !c.eat(';') {
                return Ok(term);
            }
            c.skip_ws();
            let right = Self::parse_factor(c)?;
            term = PgaTerm::concat(term, right);
        }
    }

    fn parse_factor(c: &mut Cursor<'_>) -> Result<PgaTerm, ParseError> {
        if c.eat('(') {
            c.skip_ws();
            let inner = Self::parse_term(c)?;
            c.skip_ws();
            c.expect(')')?;
            if c.eat('*') {
                return Ok(PgaTerm::repeat(inner));
            }
            return Ok(inner);
        }
        let at = c.position();
        let item = c.item()?;
        Ok(PgaTerm::Instr(pga_item(c, at, item)?))
    }
}

impl fmt::Display for PgaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PgaTerm::Instr(u) => u.fmt(f),
            PgaTerm::Concat(l, r) => {
                write!(f, "{l};")?;
                if matches!(**r, PgaTerm::Concat(..)) {
                    write!(f, "({r})")
                } else {
                    r.fmt(f)
                }
            }
            PgaTerm::Repeat(body) => write!(f, "({body})*"),
        }
    }
}

impl FromStr for PgaTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut c = Cursor::new(s);
        c.skip_ws();
        let term = PgaTerm::parse_term(&mut c)?;
        c.skip_ws();
        c.expect_end()?;
        Ok(term)
    }
}

/// A non-empty finite or eventually periodic instruction sequence:
/// `prefix` followed by `period` repeated forever (if `period` is
/// non-empty).
///
/// Canonical: the period is primitive (not a power of a shorter word) and
/// the prefix does not end with the period's last instruction, so equal
/// sequences have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InstructionStream {
    prefix: Vec<Instr>,
    period: Vec<Instr>,
}

impl InstructionStream {
    pub fn new(mut prefix: Vec<Instr>, mut period: Vec<Instr>) -> Result<Self> {
        if prefix.is_empty() && period.is_empty() {
            return Err(Error::EmptySequence);
        }
        if !period.is_empty() {
            let root = primitive_root(&period);
            period.truncate(root);
            while let (Some(p), Some(q)) = (prefix.last(), period.last()) {
                if p != q {
                    break;
                }
                prefix.pop();
                period.rotate_right(1);
            }
        }
        Ok(Self { prefix, period })
    }

    pub fn finite(instrs: Vec<Instr>) -> Result<Self> {
        Self::new(instrs, Vec::new())
    }

    pub fn prefix(&self) -> &[Instr] {
        &self.prefix
    }

    pub fn period(&self) -> &[Instr] {
        &self.period
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    /// Number of distinct positions: `|prefix| + |period|`.
    pub fn positions(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn instrs(&self) -> impl Iterator<Item = &Instr> {
        self.prefix.iter().chain(self.period.iter())
    }

    pub fn at(&self, pos: usize) -> &Instr {
        if pos < self.prefix.len() {
            &self.prefix[pos]
        } else {
            &self.period[pos - self.prefix.len()]
        }
    }

    /// The position `steps` instructions after `pos`, wrapping round the
    /// period; `None` when that runs off the end of a finite stream.
    pub fn advance(&self, pos: usize, steps: usize) -> Option<usize> {
        let p = self.prefix.len();
        let target = pos.checked_add(steps)?;
        if target < self.positions() {
            Some(target)
        } else if self.period.is_empty() {
            None
        } else {
            Some(p + (target - p) % self.period.len())
        }
    }

    pub fn map(&self, mut f: impl FnMut(&Instr) -> Instr) -> InstructionStream {
        let prefix = self.prefix.iter().map(&mut f).collect();
        let period = self.period.iter().map(&mut f).collect();
        InstructionStream::new(prefix, period).expect("mapping preserves non-emptiness")
    }

    pub fn to_term(&self) -> PgaTerm {
        let prefix = PgaTerm::from_instrs(self.prefix.iter().cloned());
        let period = PgaTerm::from_instrs(self.period.iter().cloned()).map(PgaTerm::repeat);
        match (prefix, period) {
            (Some(p), Some(q)) => PgaTerm::concat(p, q),
            (Some(t), None) | (None, Some(t)) => t,
            (None, None) => unreachable!("streams are non-empty"),
        }
    }

    pub fn has_supplementary(&self) -> bool {
        self.instrs().any(Instr::is_supplementary)
    }
}

impl fmt::Display for InstructionStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for u in &self.prefix {
            if !first {
                f.write_str(";")?;
            }
            first = false;
            write!(f, "{u}")?;
        }
        if !self.period.is_empty() {
            if !first {
                f.write_str(";")?;
            }
            f.write_str("(")?;
            for (i, u) in self.period.iter().enumerate() {
                if i > 0 {
                    f.write_str(";")?;
                }
                write!(f, "{u}")?;
            }
            f.write_str(")*")?;
        }
        Ok(())
    }
}

impl FromStr for InstructionStream {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(s.parse::<PgaTerm>()?.normalize())
    }
}

/// Length of the shortest word whose power is `w`.
fn primitive_root<T: PartialEq>(w: &[T]) -> usize {
    let n = w.len();
    (1..=n)
        .find(|&d| n.is_multiple_of(d) && (d..n).all(|i| w[i] == w[i - d]))
        .unwrap_or(n)
}

enum Denotation {
    Finite(Vec<Instr>),
    Infinite(Vec<Instr>, Vec<Instr>),
}

fn denote(t: &PgaTerm) -> Denotation {
    match t {
        PgaTerm::Instr(u) => Denotation::Finite(vec![u.clone()]),
        PgaTerm::Concat(l, r) => match denote(l) {
            // x* ; y = x*
            inf @ Denotation::Infinite(..) => inf,
            Denotation::Finite(mut w) => match denote(r) {
                Denotation::Finite(v) => {
                    w.extend(v);
                    Denotation::Finite(w)
                }
                Denotation::Infinite(p, q) => {
                    w.extend(p);
                    Denotation::Infinite(w, q)
                }
            },
        },
        PgaTerm::Repeat(body) => match denote(body) {
            Denotation::Finite(w) => Denotation::Infinite(Vec::new(), w),
            // an infinite body absorbs everything after its first copy
            inf => inf,
        },
    }
}

/// The instruction sequence denoted by `t`, in canonical form.
pub fn normalize(t: &PgaTerm) -> InstructionStream {
    let (prefix, period) = match denote(t) {
        Denotation::Finite(w) => (w, Vec::new()),
        Denotation::Infinite(p, q) => (p, q),
    };
    InstructionStream::new(prefix, period).expect("terms denote non-empty sequences")
}

/// Instruction sequence equality of closed terms.
pub fn equal_terms(t1: &PgaTerm, t2: &PgaTerm) -> bool {
    normalize(t1) == normalize(t2)
}

/// Resolves a chain of forward jumps starting at `pos`. Returns `None` for
/// inaction: `#0`, a jump off the end, or a jump chain that never reaches a
/// non-jump instruction.
pub(crate) fn resolve_jumps(s: &InstructionStream, mut pos: usize) -> Option<usize> {
    let mut seen = Vec::new();
    loop {
        match s.at(pos) {
            Instr::Core(CoreInstr::Jump(0)) => return None,
            Instr::Core(CoreInstr::Jump(l)) => {
                if seen.contains(&pos) {
                    return None;
                }
                seen.push(pos);
                pos = s.advance(pos, *l)?;
            }
            _ => return Some(pos),
        }
    }
}

/// Thread extraction for streams of core instructions.
///
/// States are stream positions (after following jumps), plus shared `S`
/// and `D` nodes, so the graph has at most `|prefix| + |period| + 2` nodes.
pub fn extract(s: &InstructionStream) -> Result<ThreadGraph> {
    if let Some(u) = s.instrs().find(|u| u.is_supplementary()) {
        return Err(Error::PolyadicInPlainExtraction(u.to_string()));
    }
    let mut builder = Builder::new();
    let dead = builder.push(Node::Dead);
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let mut work = Vec::new();

    let mut state = |pos: Option<usize>, builder: &mut Builder, work: &mut Vec<_>| match pos
        .and_then(|p| resolve_jumps(s, p))
    {
        None => dead,
        Some(p) => *ids.entry(p).or_insert_with(|| {
            let id = builder.reserve();
            work.push((p, id));
            id
        }),
    };

    let root = state(Some(0), &mut builder, &mut work);
    while let Some((pos, id)) = work.pop() {
        let next = s.advance(pos, 1);
        let skip = s.advance(pos, 2);
        let node = match s.at(pos).as_core().expect("checked above") {
            CoreInstr::Halt => Node::Stop,
            CoreInstr::Plain(a) => {
                let n = state(next, &mut builder, &mut work);
                post(a, n, n)
            }
            CoreInstr::PosTest(a) => {
                let t = state(next, &mut builder, &mut work);
                let f = state(skip, &mut builder, &mut work);
                post(a, t, f)
            }
            CoreInstr::NegTest(a) => {
                let t = state(skip, &mut builder, &mut work);
                let f = state(next, &mut builder, &mut work);
                post(a, t, f)
            }
            CoreInstr::Jump(_) => unreachable!("jumps are resolved before states are created"),
        };
        builder.set(id, node);
    }
    Ok(builder.finish(root))
}

pub(crate) fn post(a: &Basic, on_true: usize, on_false: usize) -> Node {
    Node::Post {
        action: Action::Basic(a.clone()),
        on_true,
        on_false,
    }
}
