//! Turning a main program plus a fragment vector into one PGLD program that
//! keeps its register file in a service and dispatches switch-overs through
//! per-fragment tables of pre-generated instances.

mod split;

pub use split::{nu1, nu2, split_pgld};

use std::fmt;

use crate::action::Internal;
use crate::error::{Error, Result};
use crate::notations::{
    pglc_to_pgld, pgld_to_pga, stream_to_pglc, PglcProgram, PgldInstr, PgldProgram,
};
use crate::pga::{extract, CoreInstr, Instr, InstructionStream};
use crate::polyadic::{
    extract_polyadic, is_valid, project_fragment, substitute, FragmentVector, RegisterFileState,
};
use crate::services::{theta, theta_inv, use_service, IrfConfig, IrfMethod, IrfService, IrfState};
use crate::thread::{abstract_internal, bisimilar, minimize, ThreadGraph};

/// Focus under which the register file service is used.
pub const IRF: &str = "irf";

/// Where each block of a synthesized program starts. All offsets count
/// the instructions before the block, so block starts are `offset + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub main_len: usize,
    /// `instance_offsets[i-1][j-1]` for fragment `i` and rank `j`.
    pub instance_offsets: Vec<Vec<usize>>,
    pub table_offsets: Vec<usize>,
    pub n: usize,
    pub n_prime: usize,
}

impl Layout {
    pub fn instance_offset(&self, i: usize, j: usize) -> usize {
        self.instance_offsets[i - 1][j - 1]
    }

    pub fn table_offset(&self, i: usize) -> usize {
        self.table_offsets[i - 1]
    }

    /// Length of the whole synthesized program.
    pub fn program_len(&self) -> usize {
        match self.table_offsets.last() {
            Some(last) => last + 2 * self.n_prime,
            None => self.main_len,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisReport {
    pub program: PgldProgram,
    pub layout: Layout,
    pub config: IrfConfig,
}

impl fmt::Display for SynthesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.program)?;
        let l = &self.layout;
        writeln!(f, "# layout")?;
        writeln!(f, "# main 1")?;
        for i in 1..=l.n {
            for j in 1..=l.n_prime {
                writeln!(f, "# instance {i} {j} {}", l.instance_offset(i, j) + 1)?;
            }
        }
        for i in 1..=l.n {
            writeln!(f, "# table {i} {}", l.table_offset(i) + 1)?;
        }
        writeln!(f, "# length {}", self.program.len())?;
        writeln!(f, "# {}", self.config)?;
        for j in 1..=l.n_prime {
            let sigma = theta_inv(&self.config, j).map_err(|_| fmt::Error)?;
            writeln!(f, "# theta {j} {{{sigma}}}")?;
        }
        Ok(())
    }
}

/// `Reg = [1, n]` for the highest register used by any `put`/`get`, and
/// the set of `put` payloads as the instruction alphabet.
pub fn derive_registry(main: &InstructionStream, alpha: &FragmentVector) -> IrfConfig {
    let mut regs = Vec::new();
    let mut payloads = Vec::new();
    for u in main.instrs() {
        match u {
            Instr::Put(i, v) => {
                regs.push(*i);
                payloads.push(v.clone());
            }
            Instr::Get(i) => regs.push(*i),
            _ => {}
        }
    }
    for fragment in alpha.entries() {
        let (r, p) = fragment.registers_and_payloads();
        regs.extend(r);
        payloads.extend(p);
    }
    IrfConfig::new(regs.into_iter().max().unwrap_or(0), payloads)
}

/// The instance of fragment `i` for register file `sigma`: `#0` when some
/// `get` stays unresolved, `!` when `i` is not a fragment index.
pub fn generate(alpha: &FragmentVector, i: usize, sigma: &RegisterFileState) -> InstructionStream {
    if i == 0 || i > alpha.len() {
        return single(CoreInstr::Halt);
    }
    if !is_valid(alpha, i, sigma).expect("index checked") {
        return single(CoreInstr::Jump(0));
    }
    substitute(&project_fragment(alpha, i).expect("index checked"), sigma)
}

fn single(u: CoreInstr) -> InstructionStream {
    InstructionStream::finite(vec![Instr::Core(u)]).expect("non-empty")
}

/// The main block followed by one relocatable block per `(i, j)` in
/// row-major order, where `j` ranges over the ranks of `θ`.
pub fn expand(
    main: &InstructionStream,
    alpha: &FragmentVector,
    cfg: &IrfConfig,
) -> Result<(PglcProgram, Layout)> {
    let n_prime = cfg.card()?;
    let main_block = stream_to_pglc(main);
    let mut blocks = vec![main_block];
    let mut offset = blocks[0].len();
    let mut instance_offsets = Vec::with_capacity(alpha.len());
    for i in 1..=alpha.len() {
        let mut row = Vec::with_capacity(n_prime);
        for j in 1..=n_prime {
            let block = stream_to_pglc(&generate(alpha, i, &theta_inv(cfg, j)?));
            row.push(offset);
            offset += block.len();
            blocks.push(block);
        }
        instance_offsets.push(row);
    }
    let table_offsets = (0..alpha.len()).map(|i| offset + 2 * n_prime * i).collect();
    let layout = Layout {
        main_len: blocks[0].len(),
        instance_offsets,
        table_offsets,
        n: alpha.len(),
        n_prime,
    };
    Ok((PglcProgram::concat(&blocks)?, layout))
}

/// `pgap2pgld`: expands, translates to absolute jumps, replaces the
/// supplementary instructions, and appends the dispatch tables.
///
/// `@i` jumps to table `i` (or terminates when `i` is no fragment index),
/// `put(i,u)` becomes `irf.put:i:{u}`, and a leftover `get` becomes a
/// jump to itself. Table `i` tests `irf.eq:j` for each rank `j` and jumps
/// to instance `(i, j)`.
pub fn synthesize(main: &InstructionStream, alpha: &FragmentVector) -> Result<SynthesisReport> {
    let cfg = derive_registry(main, alpha);
    let (expanded, layout) = expand(main, alpha, &cfg)?;
    let pgld = pglc_to_pgld(&expanded)?;
    let mut program: Vec<PgldInstr> = pgld
        .instrs()
        .iter()
        .enumerate()
        .map(|(p, u)| match u {
            PgldInstr::Swo(i) if (1..=layout.n).contains(i) => {
                PgldInstr::Jump(layout.table_offset(*i) + 1)
            }
            PgldInstr::Swo(_) => PgldInstr::Jump(0),
            PgldInstr::Put(i, v) => {
                PgldInstr::Plain(IrfMethod::Put(*i, v.clone()).instruction(IRF))
            }
            PgldInstr::Get(_) => PgldInstr::Jump(p + 1),
            other => other.clone(),
        })
        .collect();
    for i in 1..=layout.n {
        for j in 1..=layout.n_prime {
            program.push(PgldInstr::PosTest(IrfMethod::Eq(j).instruction(IRF)));
            program.push(PgldInstr::Jump(layout.instance_offset(i, j) + 1));
        }
    }
    debug_assert_eq!(program.len(), layout.program_len());
    Ok(SynthesisReport {
        program: PgldProgram::new(program)?,
        layout,
        config: cfg,
    })
}

/// Both sides of the synthesis equation, minimized: the synthesized
/// program run against the register file service, and the joint behaviour
/// of main and fragments, each with the internal actions abstracted.
pub fn theorem1_sides(
    main: &InstructionStream,
    alpha: &FragmentVector,
    sigma: &RegisterFileState,
) -> Result<(ThreadGraph, ThreadGraph)> {
    let report = synthesize(main, alpha)?;
    theorem1_sides_with(&report, main, alpha, sigma)
}

/// [`theorem1_sides`] against an already synthesized program, so a caller
/// checking many register files synthesizes once.
pub fn theorem1_sides_with(
    report: &SynthesisReport,
    main: &InstructionStream,
    alpha: &FragmentVector,
    sigma: &RegisterFileState,
) -> Result<(ThreadGraph, ThreadGraph)> {
    theta(&report.config, sigma)?;
    let svc = IrfService::new(report.config.clone(), IrfState::State(sigma.clone()))?;
    let synthesized = extract(&pgld_to_pga(&report.program).normalize())?;
    let left = abstract_internal(Internal::Tau, &use_service(&synthesized, IRF, &svc));
    let joint = extract_polyadic(main, sigma, alpha);
    let right = abstract_internal(Internal::Tau, &abstract_internal(Internal::Gnl, &joint));
    Ok((minimize(&left), minimize(&right)))
}

/// Checks the synthesis equation for one initial register file.
pub fn check_theorem1(
    main: &InstructionStream,
    alpha: &FragmentVector,
    sigma: &RegisterFileState,
) -> Result<bool> {
    let (left, right) = theorem1_sides(main, alpha, sigma)?;
    Ok(bisimilar(&left, &right))
}

/// Checks the synthesis equation for every register file of the derived configuration,
/// returning each state with its verdict in `θ` order.
pub fn check_theorem1_all(
    main: &InstructionStream,
    alpha: &FragmentVector,
    max_states: usize,
) -> Result<Vec<(RegisterFileState, bool)>> {
    let report = synthesize(main, alpha)?;
    let card = report.config.card()?;
    if card > max_states {
        return Err(Error::StateSpaceTooLarge(format!(
            "{card} register file states exceed the limit of {max_states}"
        )));
    }
    let verdicts = report
        .config
        .states()?
        .map(|sigma| {
            let (l, r) = theorem1_sides_with(&report, main, alpha, &sigma)?;
            Ok((sigma, bisimilar(&l, &r)))
        })
        .collect();
    verdicts
}

/// The joint behaviour with `tau` and `gnl` abstracted, minimized.
pub fn joint_behaviour(
    main: &InstructionStream,
    alpha: &FragmentVector,
    sigma: &RegisterFileState,
) -> ThreadGraph {
    let joint = extract_polyadic(main, sigma, alpha);
    minimize(&abstract_internal(
        Internal::Tau,
        &abstract_internal(Internal::Gnl, &joint),
    ))
}

/// Instance blocks in the order they appear in the synthesized program.
pub fn instance_blocks(alpha: &FragmentVector, cfg: &IrfConfig) -> Result<Vec<PglcProgram>> {
    let mut out = Vec::new();
    for i in 1..=alpha.len() {
        for j in 1..=cfg.card()? {
            out.push(stream_to_pglc(&generate(alpha, i, &theta_inv(cfg, j)?)));
        }
    }
    Ok(out)
}
