//! PGLD (absolute jumps) and a minimal relocatable relative-jump notation
//! standing in for PGLC, with translations between them and PGA.
//!
//! Both notations admit the supplementary instructions `@i`, `put(i,{u})`
//! and `get(i)`; every translation here passes them through untouched,
//! including the payloads of puts.

use std::fmt;
use std::str::FromStr;

use crate::action::Basic;
use crate::error::{Error, ParseError, Result};
use crate::pga::{post, CoreInstr, Instr, InstructionStream, PgaTerm};
use crate::syntax::{Cursor, Item};
use crate::thread::{project, Builder, Node, ThreadGraph};

/// The program notations a fragment may be written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NotationIndex {
    C,
    D,
}

impl fmt::Display for NotationIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NotationIndex::C => "C",
            NotationIndex::D => "D",
        })
    }
}

impl FromStr for NotationIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "C" => Ok(NotationIndex::C),
            "D" => Ok(NotationIndex::D),
            other => Err(Error::UnsupportedNotation(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PgldInstr {
    Plain(Basic),
    PosTest(Basic),
    NegTest(Basic),
    /// Absolute jump `##l`.
    Jump(usize),
    Swo(usize),
    Put(usize, CoreInstr),
    Get(usize),
}

impl PgldInstr {
    pub fn is_supplementary(&self) -> bool {
        matches!(
            self,
            PgldInstr::Swo(_) | PgldInstr::Put(..) | PgldInstr::Get(_)
        )
    }
}

impl fmt::Display for PgldInstr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PgldInstr::Plain(b) => write!(f, "{b}"),
            PgldInstr::PosTest(b) => write!(f, "+{b}"),
            PgldInstr::NegTest(b) => write!(f, "-{b}"),
            PgldInstr::Jump(l) => write!(f, "##{l}"),
            PgldInstr::Swo(i) => write!(f, "@{i}"),
            PgldInstr::Put(i, u) => write!(f, "put({i},{{{u}}})"),
            PgldInstr::Get(i) => write!(f, "get({i})"),
        }
    }
}

/// A PGLD program `u_1;...;u_k` with `k >= 1`. Positions are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PgldProgram {
    instrs: Vec<PgldInstr>,
}

impl PgldProgram {
    pub fn new(instrs: Vec<PgldInstr>) -> Result<Self> {
        if instrs.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Self { instrs })
    }

    pub fn instrs(&self) -> &[PgldInstr] {
        &self.instrs
    }

    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instrs.is_empty()
    }

    /// The instruction at 1-based position `j`.
    pub fn at(&self, j: usize) -> &PgldInstr {
        &self.instrs[j - 1]
    }

    pub fn has_supplementary(&self) -> bool {
        self.instrs.iter().any(PgldInstr::is_supplementary)
    }
}

impl fmt::Display for PgldProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.instrs)
    }
}

fn write_joined<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, u) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(";")?;
        }
        write!(f, "{u}")?;
    }
    Ok(())
}

impl FromStr for PgldProgram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let instrs = Cursor::new(s).sequence(|c, at, item| {
            Ok(match item {
                Item::Plain(b) => PgldInstr::Plain(b),
                Item::PosTest(b) => PgldInstr::PosTest(b),
                Item::NegTest(b) => PgldInstr::NegTest(b),
                Item::Abs(l) => PgldInstr::Jump(l),
                Item::Swo(i) => PgldInstr::Swo(i),
                Item::Put(i, u) => PgldInstr::Put(i, u),
                Item::Get(i) => PgldInstr::Get(i),
                Item::Fwd(_) | Item::Back(_) | Item::Halt => {
                    return Err(c.error_at(at, "not a PGLD instruction (PGLD jumps are `##l`)"))
                }
            })
        })?;
        PgldProgram::new(instrs)
    }
}

/// Replaces absolute jumps by forward jumps inside a repetition of the
/// whole program with two trailing halts:
/// `(ψ_1(u_1);...;ψ_k(u_k);!;!)*`.
pub fn pgld_to_pga(p: &PgldProgram) -> PgaTerm {
    let k = p.len();
    let body = p
        .instrs
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let j = i + 1;
            match u {
                PgldInstr::Jump(l) if *l == 0 || *l > k => Instr::Core(CoreInstr::Halt),
                PgldInstr::Jump(l) if j <= *l => Instr::Core(CoreInstr::Jump(l - j)),
                PgldInstr::Jump(l) => Instr::Core(CoreInstr::Jump(k + 2 - (j - l))),
                PgldInstr::Plain(b) => Instr::Core(CoreInstr::Plain(b.clone())),
                PgldInstr::PosTest(b) => Instr::Core(CoreInstr::PosTest(b.clone())),
                PgldInstr::NegTest(b) => Instr::Core(CoreInstr::NegTest(b.clone())),
                PgldInstr::Swo(i) => Instr::Swo(*i),
                PgldInstr::Put(i, v) => Instr::Put(*i, v.clone()),
                PgldInstr::Get(i) => Instr::Get(*i),
            }
        })
        .chain([Instr::Core(CoreInstr::Halt), Instr::Core(CoreInstr::Halt)]);
    PgaTerm::repeat(PgaTerm::from_instrs(body).expect("non-empty"))
}

/// Where control goes when it tries to continue at a PGLD position.
#[derive(Clone, Copy, PartialEq, Eq)]
enum PgldTarget {
    At(usize),
    Stop,
    Dead,
}

fn pgld_resolve(p: &PgldProgram, mut j: usize) -> PgldTarget {
    let k = p.len();
    let mut seen = Vec::new();
    loop {
        if j == 0 || j > k {
            return PgldTarget::Stop;
        }
        match p.at(j) {
            PgldInstr::Jump(l) if *l == 0 || *l > k => return PgldTarget::Stop,
            PgldInstr::Jump(l) if *l == j => return PgldTarget::Dead,
            PgldInstr::Jump(l) => {
                if seen.contains(&j) {
                    return PgldTarget::Dead;
                }
                seen.push(j);
                j = *l;
            }
            _ => return PgldTarget::At(j),
        }
    }
}

/// The behaviour of a supplementary-free PGLD program, computed by stepping
/// through positions directly: a jump to itself is inaction, a jump to 0 or
/// past the end terminates, and running off the end terminates.
pub fn pgld_behaviour(p: &PgldProgram) -> Result<ThreadGraph> {
    if let Some(u) = p.instrs.iter().find(|u| u.is_supplementary()) {
        return Err(Error::SupplementaryInstruction(u.to_string()));
    }
    let mut builder = Builder::new();
    let stop = builder.push(Node::Stop);
    let dead = builder.push(Node::Dead);
    let mut ids = vec![None; p.len() + 1];
    let mut work = Vec::new();

    let mut state = |j: usize, builder: &mut Builder, work: &mut Vec<(usize, usize)>| {
        match pgld_resolve(p, j) {
            PgldTarget::Stop => stop,
            PgldTarget::Dead => dead,
            PgldTarget::At(j) => *ids[j].get_or_insert_with(|| {
                let id = builder.reserve();
                work.push((j, id));
                id
            }),
        }
    };

    let root = state(1, &mut builder, &mut work);
    while let Some((j, id)) = work.pop() {
        let node = match p.at(j) {
            PgldInstr::Plain(a) => {
                let n = state(j + 1, &mut builder, &mut work);
                post(a, n, n)
            }
            PgldInstr::PosTest(a) => {
                let t = state(j + 1, &mut builder, &mut work);
                let f = state(j + 2, &mut builder, &mut work);
                post(a, t, f)
            }
            PgldInstr::NegTest(a) => {
                let t = state(j + 2, &mut builder, &mut work);
                let f = state(j + 1, &mut builder, &mut work);
                post(a, t, f)
            }
            _ => unreachable!("jumps are resolved and supplementary instructions rejected"),
        };
        builder.set(id, node);
    }
    Ok(builder.finish(root))
}

/// Depth-bounded PGLD semantics, independent of the translation to PGA.
pub fn pgld_oracle(p: &PgldProgram, depth: usize) -> Result<ThreadGraph> {
    Ok(project(depth, &pgld_behaviour(p)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PglcInstr {
    Plain(Basic),
    PosTest(Basic),
    NegTest(Basic),
    /// Relative forward jump `#l`; `#0` is inaction.
    Fwd(usize),
    /// Relative backward jump `\#l`; `\#0` is inaction.
    Back(usize),
    Halt,
    Swo(usize),
    Put(usize, CoreInstr),
    Get(usize),
}

impl PglcInstr {
    pub fn is_supplementary(&self) -> bool {
        matches!(
            self,
            PglcInstr::Swo(_) | PglcInstr::Put(..) | PglcInstr::Get(_)
        )
    }

    fn is_test(&self) -> bool {
        matches!(self, PglcInstr::PosTest(_) | PglcInstr::NegTest(_))
    }
}

impl fmt::Display for PglcInstr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PglcInstr::Plain(b) => write!(f, "{b}"),
            PglcInstr::PosTest(b) => write!(f, "+{b}"),
            PglcInstr::NegTest(b) => write!(f, "-{b}"),
            PglcInstr::Fwd(l) => write!(f, "#{l}"),
            PglcInstr::Back(l) => write!(f, "\\#{l}"),
            PglcInstr::Halt => f.write_str("!"),
            PglcInstr::Swo(i) => write!(f, "@{i}"),
            PglcInstr::Put(i, u) => write!(f, "put({i},{{{u}}})"),
            PglcInstr::Get(i) => write!(f, "get({i})"),
        }
    }
}

/// A program in the relative-jump notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PglcProgram {
    instrs: Vec<PglcInstr>,
}

impl PglcProgram {
    pub fn new(instrs: Vec<PglcInstr>) -> Result<Self> {
        if instrs.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Self { instrs })
    }

    pub fn instrs(&self) -> &[PglcInstr] {
        &self.instrs
    }

    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instrs.is_empty()
    }

    /// Concatenates blocks. Closed blocks stay closed and keep their meaning
    /// because every jump is relative.
    pub fn concat<'a>(blocks: impl IntoIterator<Item = &'a PglcProgram>) -> Result<PglcProgram> {
        PglcProgram::new(
            blocks
                .into_iter()
                .flat_map(|b| b.instrs.iter().cloned())
                .collect(),
        )
    }

    /// Every jump and every test's skip lands inside the block, and the last
    /// instruction is a jump, a halt or a switch-over, so control can neither
    /// leave the block nor fall off its end.
    pub fn is_closed_block(&self) -> bool {
        let k = self.instrs.len();
        let inside = self.instrs.iter().enumerate().all(|(i, u)| {
            let j = i + 1;
            match u {
                PglcInstr::Fwd(l) => j + l <= k,
                PglcInstr::Back(l) => *l < j,
                PglcInstr::PosTest(_) | PglcInstr::NegTest(_) => j + 2 <= k,
                _ => true,
            }
        });
        inside
            && matches!(
                self.instrs.last(),
                Some(PglcInstr::Fwd(_) | PglcInstr::Back(_) | PglcInstr::Halt | PglcInstr::Swo(_))
            )
    }
}

impl fmt::Display for PglcProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.instrs)
    }
}

impl FromStr for PglcProgram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let instrs = Cursor::new(s).sequence(|c: &Cursor<'_>, at, item| {
            Ok(match item {
                Item::Plain(b) => PglcInstr::Plain(b),
                Item::PosTest(b) => PglcInstr::PosTest(b),
                Item::NegTest(b) => PglcInstr::NegTest(b),
                Item::Fwd(l) => PglcInstr::Fwd(l),
                Item::Back(l) => PglcInstr::Back(l),
                Item::Halt => PglcInstr::Halt,
                Item::Swo(i) => PglcInstr::Swo(i),
                Item::Put(i, u) => PglcInstr::Put(i, u),
                Item::Get(i) => PglcInstr::Get(i),
                Item::Abs(_) => {
                    return Err::<_, ParseError>(
                        c.error_at(at, "absolute jumps are not available in PGLC"),
                    )
                }
            })
        })?;
        PglcProgram::new(instrs)
    }
}

/// Embeds a PGA term as a closed relocatable block.
pub fn pga_to_pglc(t: &PgaTerm) -> PglcProgram {
    stream_to_pglc(&t.normalize())
}

/// Emits the prefix and one copy of the period verbatim, with jumps
/// re-targeted to their landing position in that layout.
///
/// A periodic stream is closed by `\#|period|`, doubled when the period
/// ends in a test so that the test's skip also wraps. A finite stream gets
/// inaction sentinels `#0` wherever control could otherwise leave the block.
pub fn stream_to_pglc(s: &InstructionStream) -> PglcProgram {
    let m = s.positions();
    let q = s.period().len();
    let mut clamped = false;
    let mut out: Vec<PglcInstr> = (0..m)
        .map(|pos| match s.at(pos) {
            Instr::Core(CoreInstr::Jump(0)) => PglcInstr::Fwd(0),
            Instr::Core(CoreInstr::Jump(l)) => {
                let target = s.advance(pos, *l).unwrap_or_else(|| {
                    clamped = true;
                    m
                });
                if target >= pos {
                    PglcInstr::Fwd(target - pos)
                } else {
                    PglcInstr::Back(pos - target)
                }
            }
            Instr::Core(CoreInstr::Plain(b)) => PglcInstr::Plain(b.clone()),
            Instr::Core(CoreInstr::PosTest(b)) => PglcInstr::PosTest(b.clone()),
            Instr::Core(CoreInstr::NegTest(b)) => PglcInstr::NegTest(b.clone()),
            Instr::Core(CoreInstr::Halt) => PglcInstr::Halt,
            Instr::Swo(i) => PglcInstr::Swo(*i),
            Instr::Put(i, u) => PglcInstr::Put(*i, u.clone()),
            Instr::Get(i) => PglcInstr::Get(*i),
        })
        .collect();

    let last_is_test = out.last().is_some_and(PglcInstr::is_test);
    if q > 0 {
        out.push(PglcInstr::Back(q));
        if last_is_test {
            out.push(PglcInstr::Back(q));
        }
    } else {
        let terminal = matches!(
            out.last(),
            Some(PglcInstr::Fwd(_) | PglcInstr::Back(_) | PglcInstr::Halt | PglcInstr::Swo(_))
        );
        let skip_to_end = m >= 2 && out[m - 2].is_test();
        if !terminal || skip_to_end || clamped {
            out.push(PglcInstr::Fwd(0));
        }
        if last_is_test {
            out.push(PglcInstr::Fwd(0));
        }
    }
    PglcProgram::new(out).expect("streams are non-empty")
}

/// Position-wise translation to absolute jumps: `#l` at `j` becomes
/// `##(j+l)`, `\#l` becomes `##(j-l)`, `#0`/`\#0` become the self-jump
/// `##j` and `!` becomes `##0`.
pub fn pglc_to_pgld(p: &PglcProgram) -> Result<PgldProgram> {
    let instrs = p
        .instrs
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let j = i + 1;
            Ok(match u {
                PglcInstr::Fwd(0) | PglcInstr::Back(0) => PgldInstr::Jump(j),
                PglcInstr::Fwd(l) => PgldInstr::Jump(j + l),
                PglcInstr::Back(l) if *l >= j => {
                    return Err(Error::UnanchoredBackwardJump { position: j })
                }
                PglcInstr::Back(l) => PgldInstr::Jump(j - l),
                PglcInstr::Halt => PgldInstr::Jump(0),
                PglcInstr::Plain(b) => PgldInstr::Plain(b.clone()),
                PglcInstr::PosTest(b) => PgldInstr::PosTest(b.clone()),
                PglcInstr::NegTest(b) => PgldInstr::NegTest(b.clone()),
                PglcInstr::Swo(i) => PgldInstr::Swo(*i),
                PglcInstr::Put(i, v) => PgldInstr::Put(*i, v.clone()),
                PglcInstr::Get(i) => PgldInstr::Get(*i),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    PgldProgram::new(instrs)
}

/// Projects a relative-jump program to PGA. Control that leaves the program
/// (running off either end) is inaction.
///
/// Without backward jumps the program is already a PGA instruction
/// sequence. Otherwise it is repeated with two trailing `#0` so that a
/// backward jump becomes a forward jump into the next copy.
pub fn pglc_to_pga(p: &PglcProgram) -> PgaTerm {
    let k = p.len();
    let has_back = p
        .instrs
        .iter()
        .any(|u| matches!(u, PglcInstr::Back(l) if *l > 0));
    let core = |u: &PglcInstr, jump: Instr| match u {
        PglcInstr::Plain(b) => Instr::Core(CoreInstr::Plain(b.clone())),
        PglcInstr::PosTest(b) => Instr::Core(CoreInstr::PosTest(b.clone())),
        PglcInstr::NegTest(b) => Instr::Core(CoreInstr::NegTest(b.clone())),
        PglcInstr::Halt => Instr::Core(CoreInstr::Halt),
        PglcInstr::Swo(i) => Instr::Swo(*i),
        PglcInstr::Put(i, v) => Instr::Put(*i, v.clone()),
        PglcInstr::Get(i) => Instr::Get(*i),
        PglcInstr::Fwd(_) | PglcInstr::Back(_) => jump,
    };
    let jump = |l: usize| Instr::Core(CoreInstr::Jump(l));
    if !has_back {
        let body = p.instrs.iter().map(|u| {
            let l = match u {
                PglcInstr::Fwd(l) => *l,
                _ => 0,
            };
            core(u, jump(l))
        });
        return PgaTerm::from_instrs(body).expect("non-empty");
    }
    let body = p
        .instrs
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let j = i + 1;
            // k+1-j reaches the first trailing #0
            let out = k + 1 - j;
            let l = match u {
                PglcInstr::Fwd(0) | PglcInstr::Back(0) => 0,
                PglcInstr::Fwd(l) if j + l <= k => *l,
                PglcInstr::Fwd(_) => out,
                PglcInstr::Back(l) if *l < j => k + 2 - l,
                PglcInstr::Back(_) => out,
                _ => 0,
            };
            core(u, jump(l))
        })
        .chain([jump(0), jump(0)]);
    PgaTerm::repeat(PgaTerm::from_instrs(body).expect("non-empty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pga::extract;
    use crate::thread::{bisimilar, minimize};

    fn pgld(s: &str) -> PgldProgram {
        s.parse().unwrap()
    }

    fn pglc(s: &str) -> PglcProgram {
        s.parse().unwrap()
    }

    fn term(s: &str) -> PgaTerm {
        s.parse().unwrap()
    }

    #[test]
    fn pgld_to_pga_examples() {
        assert_eq!(pgld_to_pga(&pgld("a;##1")), term("(a;#3;!;!)*"));
        assert_eq!(pgld_to_pga(&pgld("+a;##0")), term("(+a;!;!;!)*"));
        assert_eq!(pgld_to_pga(&pgld("##3")), term("(!;!;!)*"));
    }

    #[test]
    fn pgld_to_pga_a_loop_behaves_as_a_omega() {
        let g = extract(&pgld_to_pga(&pgld("a;##1")).normalize()).unwrap();
        assert!(bisimilar(
            &g,
            &ThreadGraph::cycle(&[crate::Action::basic("a")])
        ));
    }

    #[test]
    fn oracle_examples() {
        let a = crate::Action::basic("a");
        let expected = project(4, &ThreadGraph::cycle(std::slice::from_ref(&a)));
        assert_eq!(
            minimize(&pgld_oracle(&pgld("a;##1"), 4).unwrap()),
            minimize(&expected)
        );
        assert_eq!(pgld_oracle(&pgld("##1"), 7).unwrap(), ThreadGraph::dead());
        let a_s = ThreadGraph::prefix(a, &ThreadGraph::stop());
        assert_eq!(minimize(&pgld_oracle(&pgld("a"), 2).unwrap()), a_s);
    }

    #[test]
    fn oracle_rejects_supplementary() {
        assert!(matches!(
            pgld_oracle(&pgld("a;@1"), 3),
            Err(Error::SupplementaryInstruction(_))
        ));
    }

    #[test]
    fn oracle_jump_cycle_is_inaction() {
        assert_eq!(
            pgld_behaviour(&pgld("##2;##1")).unwrap(),
            ThreadGraph::dead()
        );
    }

    #[test]
    fn pga_to_pglc_examples() {
        assert_eq!(pga_to_pglc(&term("a;!")), pglc("a;!"));
        assert_eq!(pga_to_pglc(&term("a")), pglc("a;#0"));
        let block = pga_to_pglc(&term("(a;#3;!;!)*"));
        // #3 at offset 1 wraps to offset 0 of the period, one step back
        assert_eq!(block, pglc("a;\\#1;!;!;\\#4"));
        assert!(block.is_closed_block());
    }

    #[test]
    fn pga_to_pglc_test_at_end_gets_two_sentinels() {
        let block = pga_to_pglc(&term("b;+a"));
        assert_eq!(block, pglc("b;+a;#0;#0"));
        assert!(block.is_closed_block());
    }

    #[test]
    fn pga_to_pglc_period_ending_in_test_wraps_skip() {
        let t = term("(a;+b)*");
        let block = pga_to_pglc(&t);
        assert_eq!(block, pglc("a;+b;\\#2;\\#2"));
        let via = pgld_behaviour(&pglc_to_pgld(&block).unwrap()).unwrap();
        assert!(bisimilar(&via, &extract(&t.normalize()).unwrap()));
    }

    #[test]
    fn pglc_to_pgld_examples() {
        assert_eq!(pglc_to_pgld(&pglc("a;#0")).unwrap(), pgld("a;##2"));
        assert_eq!(pglc_to_pgld(&pglc("!")).unwrap(), pgld("##0"));
        assert_eq!(pglc_to_pgld(&pglc("a;\\#1")).unwrap(), pgld("a;##1"));
    }

    #[test]
    fn unanchored_backward_jump_is_an_error() {
        assert_eq!(
            pglc_to_pgld(&pglc("a;\\#2")),
            Err(Error::UnanchoredBackwardJump { position: 2 })
        );
    }

    #[test]
    fn pglc_projection_of_halting_block_is_finite() {
        assert_eq!(pglc_to_pga(&pglc("a;!")).normalize().to_string(), "a;!");
    }

    #[test]
    fn supplementary_and_payloads_pass_through() {
        let block = pga_to_pglc(&term("put(1,{#5});get(1);@2"));
        assert_eq!(block.to_string(), "put(1,{#5});get(1);@2");
        assert_eq!(
            pglc_to_pgld(&block).unwrap().to_string(),
            "put(1,{#5});get(1);@2"
        );
        assert_eq!(
            pgld_to_pga(&pgld("put(1,{#5});##1")).to_string(),
            "(put(1,{#5});#3;!;!)*"
        );
    }

    #[test]
    fn notation_indices() {
        assert_eq!("C".parse::<NotationIndex>().unwrap(), NotationIndex::C);
        assert_eq!("D".parse::<NotationIndex>().unwrap(), NotationIndex::D);
        for bad in ["A", "B", "Dg", "E", "S", "X"] {
            assert!(matches!(
                bad.parse::<NotationIndex>(),
                Err(Error::UnsupportedNotation(_))
            ));
        }
    }

    #[test]
    fn pgld_parse_rejects_relative_jumps() {
        let err = "a;#2".parse::<PgldProgram>().unwrap_err();
        assert!(err.to_string().contains("1:3"), "{err}");
    }
}
