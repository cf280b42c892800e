//! Splitting a PGLD program into two fragments that pass control to each
//! other through register 1 and 2.
//!
//! Fragment 1 holds instructions `1..=h`, fragment 2 the rest. Each starts
//! with `get(r)` for its own register, so a switch-over lands on whatever
//! forward jump the other fragment stored there. Every original instruction
//! becomes a slot: the instruction itself, a local absolute jump, or a
//! remote goto `put(r',{#m});@i'`. A slot directly after a test has to be
//! one instruction long (the test skips exactly one), so a remote goto in
//! that position jumps to a trampoline pair appended to the fragment.

use crate::error::{Error, Result};
use crate::notations::{PgldInstr, PgldProgram};
use crate::pga::{CoreInstr, Instr, InstructionStream};
use crate::polyadic::{Fragment, FragmentVector};

/// Number of absolute jumps `##m` with `m > h` among positions `1..=l`
/// (capped at `h`).
pub fn nu1(p: &PgldProgram, h: usize, l: usize) -> usize {
    (1..=l.min(h))
        .filter(|&j| matches!(p.at(j), PgldInstr::Jump(m) if *m > h))
        .count()
}

/// Number of absolute jumps `##m` with `m <= h` among the first `l`
/// positions of the second half.
pub fn nu2(p: &PgldProgram, h: usize, l: usize) -> usize {
    (h + 1..=(h + l).min(p.len()))
        .filter(|&j| matches!(p.at(j), PgldInstr::Jump(m) if *m <= h))
        .count()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Goto {
    Term,
    Local(usize),
    Remote(usize),
}

enum Slot {
    Instr(PgldInstr),
    Goto { to: Goto, single: bool },
}

impl Slot {
    fn len(&self) -> usize {
        match self {
            Slot::Goto {
                to: Goto::Remote(_),
                single: false,
            } => 2,
            _ => 1,
        }
    }

    fn needs_trampoline(&self) -> bool {
        matches!(
            self,
            Slot::Goto {
                to: Goto::Remote(_),
                single: true
            }
        )
    }
}

struct Half {
    lo: usize,
    /// Register read by this fragment's leading `get`; also its index in
    /// the vector.
    reg: usize,
    slots: Vec<Slot>,
    /// Start of the slot for each original position `lo..=hi`.
    starts: Vec<usize>,
    trampolines: Vec<(usize, usize)>,
}

impl Half {
    fn build(p: &PgldProgram, lo: usize, hi: usize, reg: usize, zone: Vec<Slot>) -> Half {
        let k = p.len();
        let classify = |x: usize| {
            if x == 0 || x > k {
                Goto::Term
            } else if (lo..=hi).contains(&x) {
                Goto::Local(x)
            } else {
                Goto::Remote(x)
            }
        };
        let mut slots: Vec<Slot> = (lo..=hi)
            .map(|j| match p.at(j) {
                PgldInstr::Jump(l) => Slot::Goto {
                    to: classify(*l),
                    single: j > lo && is_test(p.at(j - 1)),
                },
                u => Slot::Instr(u.clone()),
            })
            .collect();
        slots.extend(zone);
        let mut pos = 2;
        let mut starts = Vec::with_capacity(slots.len());
        for s in &slots {
            starts.push(pos);
            pos += s.len();
        }
        let mut trampolines = Vec::new();
        for s in &slots {
            if let Slot::Goto {
                to: Goto::Remote(x),
                single: true,
            } = s
            {
                trampolines.push((pos, *x));
                pos += 2;
            }
        }
        starts.truncate(hi - lo + 1);
        Half {
            lo,
            reg,
            slots,
            starts,
            trampolines,
        }
    }

    fn start(&self, x: usize) -> usize {
        self.starts[x - self.lo]
    }

    fn emit(&self, other: &Half) -> PgldProgram {
        let remote = |x: usize| {
            vec![
                PgldInstr::Put(other.reg, CoreInstr::Jump(other.start(x) - 1)),
                PgldInstr::Swo(other.reg),
            ]
        };
        let mut out = vec![PgldInstr::Get(self.reg)];
        let mut tramp = self.trampolines.iter();
        for s in &self.slots {
            match s {
                Slot::Instr(u) => out.push(u.clone()),
                Slot::Goto { to: Goto::Term, .. } => out.push(PgldInstr::Jump(0)),
                Slot::Goto {
                    to: Goto::Local(x), ..
                } => out.push(PgldInstr::Jump(self.start(*x))),
                Slot::Goto {
                    to: Goto::Remote(x),
                    single: false,
                } => out.extend(remote(*x)),
                Slot::Goto {
                    to: Goto::Remote(_),
                    single: true,
                } => {
                    let (at, _) = tramp.next().expect("one trampoline per single remote slot");
                    out.push(PgldInstr::Jump(*at));
                }
            }
        }
        for (at, x) in &self.trampolines {
            debug_assert_eq!(out.len() + 1, *at);
            out.extend(remote(*x));
        }
        PgldProgram::new(out).expect("non-empty")
    }
}

fn is_test(u: &PgldInstr) -> bool {
    matches!(u, PgldInstr::PosTest(_) | PgldInstr::NegTest(_))
}

/// Splits `p` after position `h` into a two-fragment vector (both in
/// notation D) and the bootstrap main stream `put(1,{#1});@1`.
///
/// Where control can leave the first half by falling through or skipping
/// past position `h`, explicit gotos to `h+1` and `h+2` follow the half.
/// Jumps to 0 or past the end become `##0`.
pub fn split_pgld(p: &PgldProgram, h: usize) -> Result<(InstructionStream, FragmentVector)> {
    let k = p.len();
    if h == 0 || h >= k {
        return Err(Error::SplitPoint { h, len: k });
    }
    if let Some(u) = p.instrs().iter().find(|u| u.is_supplementary()) {
        return Err(Error::SupplementaryInstruction(u.to_string()));
    }
    let goto = |x: usize, single: bool| Slot::Goto {
        to: if x > k { Goto::Term } else { Goto::Remote(x) },
        single,
    };
    let last_is_test = is_test(p.at(h));
    let mut zone_a = Vec::new();
    let falls = !matches!(p.at(h), PgldInstr::Jump(_));
    let skipped_into = h >= 2 && is_test(p.at(h - 1));
    if falls || skipped_into {
        zone_a.push(goto(h + 1, last_is_test));
    }
    if last_is_test {
        zone_a.push(goto(h + 2, false));
    }
    let a = Half::build(p, 1, h, 1, zone_a);

    let b = Half::build(p, h + 1, k, 2, Vec::new());
    let b = if b.slots.iter().any(Slot::needs_trampoline) {
        let term = || Slot::Goto {
            to: Goto::Term,
            single: false,
        };
        Half::build(p, h + 1, k, 2, vec![term(), term()])
    } else {
        b
    };

    let first = a.emit(&b);
    let second = b.emit(&a);
    let bootstrap = InstructionStream::finite(vec![
        Instr::Put(1, CoreInstr::Jump(a.start(1) - 1)),
        Instr::Swo(1),
    ])?;
    Ok((
        bootstrap,
        FragmentVector::new(vec![Fragment::D(first), Fragment::D(second)]),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::Action;
    use crate::notations::pgld_behaviour;
    use crate::synthesis::{derive_registry, joint_behaviour};
    use crate::thread::{bisimilar, ThreadGraph};

    fn pgld(s: &str) -> PgldProgram {
        s.parse().unwrap()
    }

    fn assert_split_preserves(src: &str, h: usize) {
        let p = pgld(src);
        let (main, alpha) = split_pgld(&p, h).unwrap();
        let expected = pgld_behaviour(&p).unwrap();
        let cfg = derive_registry(&main, &alpha);
        for sigma in cfg.states().unwrap() {
            let joint = joint_behaviour(&main, &alpha, &sigma);
            assert!(
                bisimilar(&joint, &expected),
                "{src} at {h}, sigma {{{sigma}}}:\n{alpha}\njoint:\n{joint}\nexpected:\n{expected}"
            );
        }
    }

    #[test]
    fn micro_instance() {
        let (main, alpha) = split_pgld(&pgld("a;##1"), 1).unwrap();
        assert_eq!(main.to_string(), "put(1,{#1});@1");
        assert_eq!(
            alpha.to_string(),
            "D: get(1);a;put(2,{#1});@2\nD: get(2);put(1,{#1});@1\n"
        );
        let joint = joint_behaviour(&main, &alpha, &Default::default());
        assert!(bisimilar(
            &joint,
            &ThreadGraph::cycle(&[Action::basic("a")])
        ));
    }

    #[test]
    fn fall_through_bridge() {
        assert_split_preserves("a;b", 1);
        let (main, alpha) = split_pgld(&pgld("a;b"), 1).unwrap();
        let a = Action::basic("a");
        let b = Action::basic("b");
        let expected = ThreadGraph::prefix(a, &ThreadGraph::prefix(b, &ThreadGraph::stop()));
        assert!(bisimilar(
            &joint_behaviour(&main, &alpha, &Default::default()),
            &expected
        ));
    }

    #[test]
    fn nu_counts() {
        let p = pgld("##3;a;##1;b");
        assert_eq!(nu1(&p, 2, 1), 1);
        assert_eq!(nu1(&p, 2, 2), 1);
        assert_eq!(nu2(&p, 2, 1), 1);
        assert_eq!(nu2(&p, 2, 2), 1);
    }

    #[test]
    fn cross_jump_onto_cross_jump() {
        assert_split_preserves("##3;a;##1;b", 2);
        assert_split_preserves("##4;##3;##1;##2", 2);
    }

    #[test]
    fn tests_at_the_boundary() {
        assert_split_preserves("+a;b;c;d", 1);
        assert_split_preserves("b;+a;c;d", 2);
        assert_split_preserves("-a;+b;c;##1", 2);
        assert_split_preserves("+a;##3;c;+d;##1;e", 3);
    }

    #[test]
    fn test_before_remote_goto_uses_trampoline() {
        assert_split_preserves("+a;##4;b;c", 2);
        assert_split_preserves("a;b;+c;##1", 2);
        assert_split_preserves("+a;##3;+b;##1", 2);
    }

    #[test]
    fn termination_and_self_jumps() {
        assert_split_preserves("a;##0;##3;b", 2);
        assert_split_preserves("a;##9;##3;b", 2);
        assert_split_preserves("##1;a", 1);
        assert_split_preserves("a;##2", 1);
    }

    #[test]
    fn split_point_must_be_inside() {
        assert_eq!(
            split_pgld(&pgld("a;b"), 2).unwrap_err(),
            Error::SplitPoint { h: 2, len: 2 }
        );
        assert_eq!(
            split_pgld(&pgld("a;b"), 0).unwrap_err(),
            Error::SplitPoint { h: 0, len: 2 }
        );
        assert!(matches!(
            split_pgld(&pgld("a;@1"), 1),
            Err(Error::SupplementaryInstruction(_))
        ));
    }
}
