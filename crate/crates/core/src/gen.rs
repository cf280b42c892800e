//! Random programs, threads and synthesis instances for property tests,
//! the acceptance suite and the CLI `corpus` command.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::action::{Action, Basic};
use crate::notations::{PglcInstr, PglcProgram, PgldInstr, PgldProgram};
use crate::pga::{CoreInstr, Instr, InstructionStream, PgaTerm};
use crate::polyadic::{Fragment, FragmentVector, RegisterFileState};
use crate::services::IrfConfig;
use crate::thread::{Node, ThreadGraph};

const NAMES: [&str; 3] = ["a", "b", "c"];

fn basic<R: Rng + ?Sized>(rng: &mut R) -> Basic {
    Basic::new(NAMES.choose(rng).expect("non-empty")).expect("valid name")
}

/// A random thread graph with up to `max_nodes` nodes over the actions
/// `a`, `b`, `c`, `tau` and `gnl`. Internal actions get equal branches.
pub fn graph<R: Rng + ?Sized>(rng: &mut R, max_nodes: usize) -> ThreadGraph {
    let n = rng.gen_range(1..=max_nodes.max(1));
    let nodes = (0..n)
        .map(|_| match rng.gen_range(0..10) {
            0 => Node::Stop,
            1 => Node::Dead,
            2 | 3 => {
                let t = rng.gen_range(0..n);
                let action = if rng.gen_bool(0.5) {
                    Action::TAU
                } else {
                    Action::GNL
                };
                Node::Post {
                    action,
                    on_true: t,
                    on_false: t,
                }
            }
            _ => Node::Post {
                action: Action::Basic(basic(rng)),
                on_true: rng.gen_range(0..n),
                on_false: rng.gen_range(0..n),
            },
        })
        .collect();
    ThreadGraph::new(nodes, 0).expect("generated graphs are valid")
}

/// A random graph without internal actions.
pub fn basic_graph<R: Rng + ?Sized>(rng: &mut R, max_nodes: usize) -> ThreadGraph {
    let n = rng.gen_range(1..=max_nodes.max(1));
    let nodes = (0..n)
        .map(|_| match rng.gen_range(0..8) {
            0 => Node::Stop,
            1 => Node::Dead,
            _ => Node::Post {
                action: Action::Basic(basic(rng)),
                on_true: rng.gen_range(0..n),
                on_false: rng.gen_range(0..n),
            },
        })
        .collect();
    ThreadGraph::new(nodes, 0).expect("generated graphs are valid")
}

/// A core primitive instruction with jumps up to `max_jump`.
pub fn core_instr<R: Rng + ?Sized>(rng: &mut R, max_jump: usize) -> CoreInstr {
    match rng.gen_range(0..10) {
        0..=2 => CoreInstr::Plain(basic(rng)),
        3 => CoreInstr::PosTest(basic(rng)),
        4 => CoreInstr::NegTest(basic(rng)),
        5..=7 => CoreInstr::Jump(rng.gen_range(0..=max_jump)),
        _ => CoreInstr::Halt,
    }
}

/// A random supplementary-free PGA term with `1..=max_instrs` instructions,
/// mixing concatenation and repetition.
pub fn pga_term<R: Rng + ?Sized>(rng: &mut R, max_instrs: usize) -> PgaTerm {
    let n = rng.gen_range(1..=max_instrs.max(1));
    term_of(rng, n, &mut |rng| Instr::Core(core_instr(rng, 4)))
}

fn term_of<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    leaf: &mut impl FnMut(&mut R) -> Instr,
) -> PgaTerm {
    if n == 1 {
        let u = PgaTerm::Instr(leaf(rng));
        return if rng.gen_ratio(1, 6) {
            PgaTerm::repeat(u)
        } else {
            u
        };
    }
    let left = rng.gen_range(1..n);
    let t = PgaTerm::concat(term_of(rng, left, leaf), term_of(rng, n - left, leaf));
    if rng.gen_ratio(1, 5) {
        PgaTerm::repeat(t)
    } else {
        t
    }
}

/// A random supplementary-free PGLD program of length `1..=max_len`;
/// jump targets range over `0..=len+1`.
pub fn pgld<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> PgldProgram {
    let k = rng.gen_range(1..=max_len.max(1));
    pgld_of_len(rng, k)
}

pub fn pgld_of_len<R: Rng + ?Sized>(rng: &mut R, k: usize) -> PgldProgram {
    let instrs = (0..k)
        .map(|_| match rng.gen_range(0..10) {
            0..=3 => PgldInstr::Plain(basic(rng)),
            4 => PgldInstr::PosTest(basic(rng)),
            5 => PgldInstr::NegTest(basic(rng)),
            _ => PgldInstr::Jump(rng.gen_range(0..=k + 1)),
        })
        .collect();
    PgldProgram::new(instrs).expect("non-empty")
}

/// A random program in the relative-jump notation, not necessarily closed.
pub fn pglc<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> PglcProgram {
    let k = rng.gen_range(1..=max_len.max(1));
    let instrs = (0..k)
        .map(|_| match rng.gen_range(0..11) {
            0..=2 => PglcInstr::Plain(basic(rng)),
            3 => PglcInstr::PosTest(basic(rng)),
            4 => PglcInstr::NegTest(basic(rng)),
            5 | 6 => PglcInstr::Fwd(rng.gen_range(0..=k)),
            7 | 8 => PglcInstr::Back(rng.gen_range(0..=k)),
            _ => PglcInstr::Halt,
        })
        .collect();
    PglcProgram::new(instrs).expect("non-empty")
}

/// Shape of a random synthesis instance.
#[derive(Clone, Debug)]
pub struct InstanceShape {
    pub max_main: usize,
    pub max_fragments: usize,
    pub max_fragment_len: usize,
    pub max_registers: usize,
    pub max_alphabet: usize,
}

impl Default for InstanceShape {
    fn default() -> Self {
        Self {
            max_main: 8,
            max_fragments: 3,
            max_fragment_len: 8,
            max_registers: 2,
            max_alphabet: 2,
        }
    }
}

struct Supplementary {
    fragments: usize,
    registers: usize,
    alphabet: Vec<CoreInstr>,
}

impl Supplementary {
    /// `None` means "pick a core instruction instead".
    fn pick<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Instr> {
        match rng.gen_range(0..10) {
            0 | 1 => Some(Instr::Swo(rng.gen_range(0..=self.fragments + 1))),
            2 | 3 if self.registers > 0 && !self.alphabet.is_empty() => Some(Instr::Put(
                rng.gen_range(1..=self.registers),
                self.alphabet.choose(rng).expect("non-empty").clone(),
            )),
            4 if self.registers > 0 => Some(Instr::Get(rng.gen_range(1..=self.registers))),
            _ => None,
        }
    }
}

/// A main stream and fragment vector (notation D) within `shape`. Every
/// derived register file configuration has at most
/// `(max_alphabet + 1)^max_registers` states.
pub fn theorem1_instance<R: Rng + ?Sized>(
    rng: &mut R,
    shape: &InstanceShape,
) -> (InstructionStream, FragmentVector) {
    let pool = [
        CoreInstr::Jump(1),
        CoreInstr::Jump(2),
        CoreInstr::Jump(3),
        CoreInstr::Halt,
        CoreInstr::Plain(Basic::new("c").expect("valid")),
        CoreInstr::PosTest(Basic::new("b").expect("valid")),
    ];
    // mostly non-trivial register files; the empty ones still come up
    let mut mostly_positive = |max: usize| {
        if max == 0 || rng.gen_ratio(1, 6) {
            0
        } else {
            rng.gen_range(1..=max)
        }
    };
    let alphabet_len = mostly_positive(shape.max_alphabet);
    let registers = mostly_positive(shape.max_registers);
    let alphabet: Vec<CoreInstr> = pool.choose_multiple(rng, alphabet_len).cloned().collect();
    let supp = Supplementary {
        fragments: rng.gen_range(0..=shape.max_fragments),
        registers,
        alphabet,
    };

    let main_len = rng.gen_range(1..=shape.max_main.max(1));
    let main: Vec<Instr> = (0..main_len)
        .map(|_| {
            supp.pick(rng)
                .unwrap_or_else(|| Instr::Core(core_instr(rng, 3)))
        })
        .collect();
    let period = rng.gen_range(0..=main_len);
    let (prefix, period) = main.split_at(main_len - period);
    let main = InstructionStream::new(prefix.to_vec(), period.to_vec()).expect("non-empty");

    let fragments = (0..supp.fragments)
        .map(|_| {
            let k = rng.gen_range(1..=shape.max_fragment_len.max(1));
            let instrs = (0..k)
                .map(|_| match supp.pick(rng) {
                    Some(Instr::Swo(i)) => PgldInstr::Swo(i),
                    Some(Instr::Put(i, u)) => PgldInstr::Put(i, u),
                    Some(Instr::Get(i)) => PgldInstr::Get(i),
                    _ => match rng.gen_range(0..10) {
                        0..=3 => PgldInstr::Plain(basic(rng)),
                        4 => PgldInstr::PosTest(basic(rng)),
                        5 => PgldInstr::NegTest(basic(rng)),
                        _ => PgldInstr::Jump(rng.gen_range(0..=k + 1)),
                    },
                })
                .collect();
            Fragment::D(PgldProgram::new(instrs).expect("non-empty"))
        })
        .collect();
    (main, FragmentVector::new(fragments))
}

/// A random register file state inside `cfg`.
pub fn register_file<R: Rng + ?Sized>(rng: &mut R, cfg: &IrfConfig) -> RegisterFileState {
    (1..=cfg.registers())
        .filter_map(|i| {
            let k = rng.gen_range(0..=cfg.alphabet().len());
            (k > 0).then(|| (i, cfg.alphabet()[k - 1].clone()))
        })
        .collect()
}
