//! Services, the instruction register file service, and the use operator
//! that lets a thread delegate its focused actions to a service.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use crate::action::{Action, Basic};
use crate::error::{Error, Result};
use crate::pga::CoreInstr;
use crate::polyadic::RegisterFileState;
use crate::thread::{Builder, Node, ThreadGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reply {
    True,
    False,
    Blocked,
}

/// A deterministic service. Once [`Service::reply`] gives
/// [`Reply::Blocked`], every method in the resulting state must be blocked
/// too.
pub trait Service {
    type State: Clone + Eq + Hash + fmt::Debug;

    fn initial_state(&self) -> Self::State;

    fn effect(&self, method: &str, state: &Self::State) -> Self::State;

    fn reply(&self, method: &str, state: &Self::State) -> Reply;
}

/// `Reg = [1, registers]` and the payload alphabet.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IrfConfig {
    registers: usize,
    alphabet: Vec<CoreInstr>,
}

impl IrfConfig {
    /// The alphabet is sorted and deduplicated, which fixes `θ`.
    pub fn new(registers: usize, alphabet: impl IntoIterator<Item = CoreInstr>) -> Self {
        let mut alphabet: Vec<CoreInstr> = alphabet.into_iter().collect();
        alphabet.sort();
        alphabet.dedup();
        Self {
            registers,
            alphabet,
        }
    }

    pub fn registers(&self) -> usize {
        self.registers
    }

    pub fn alphabet(&self) -> &[CoreInstr] {
        &self.alphabet
    }

    /// `|IRFS| = (|alphabet| + 1)^registers`.
    pub fn card(&self) -> Result<usize> {
        u32::try_from(self.registers)
            .ok()
            .and_then(|n| (self.alphabet.len() + 1).checked_pow(n))
            .ok_or_else(|| {
                Error::StateSpaceTooLarge(format!(
                    "{} registers over {} instructions",
                    self.registers,
                    self.alphabet.len()
                ))
            })
    }

    pub fn contains(&self, sigma: &RegisterFileState) -> bool {
        sigma
            .iter()
            .all(|(i, u)| (1..=self.registers).contains(&i) && self.alphabet.contains(u))
    }

    /// All of IRFS in `θ` order.
    pub fn states(&self) -> Result<impl Iterator<Item = RegisterFileState> + '_> {
        let card = self.card()?;
        Ok((1..=card).map(move |j| self.theta_inv(j).expect("rank in range")))
    }
}

impl fmt::Display for IrfConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Reg = [1,{}], Instr = {{", self.registers)?;
        for (n, u) in self.alphabet.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{u}")?;
        }
        f.write_str("}")
    }
}

/// The 1-based rank of `sigma` among the register tuples over `1..=n`,
/// ordered lexicographically with register 1 most significant and an
/// absent entry below every instruction.
pub fn theta(cfg: &IrfConfig, sigma: &RegisterFileState) -> Result<usize> {
    if !cfg.contains(sigma) {
        return Err(Error::OutsideIrfs(format!("{{{sigma}}}")));
    }
    cfg.card()?;
    let base = cfg.alphabet.len() + 1;
    let rank = (1..=cfg.registers).fold(0, |acc, i| {
        let digit = sigma
            .get(i)
            .map_or(0, |u| cfg.alphabet.binary_search(u).expect("checked") + 1);
        acc * base + digit
    });
    Ok(rank + 1)
}

/// Inverse of [`theta`].
pub fn theta_inv(cfg: &IrfConfig, j: usize) -> Result<RegisterFileState> {
    cfg.theta_inv(j)
}

impl IrfConfig {
    fn theta_inv(&self, j: usize) -> Result<RegisterFileState> {
        let card = self.card()?;
        if j == 0 || j > card {
            return Err(Error::OutsideIrfs(format!("rank {j} not in [1,{card}]")));
        }
        let base = self.alphabet.len() + 1;
        let mut rest = j - 1;
        let mut sigma = RegisterFileState::new();
        for i in (1..=self.registers).rev() {
            let digit = rest % base;
            rest /= base;
            if digit > 0 {
                sigma.set(i, self.alphabet[digit - 1].clone());
            }
        }
        Ok(sigma)
    }
}

/// A method of the register file service: `put:i:u` or `eq:j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IrfMethod {
    Put(usize, CoreInstr),
    Eq(usize),
}

impl fmt::Display for IrfMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrfMethod::Put(i, u) => write!(f, "put:{i}:{{{u}}}"),
            IrfMethod::Eq(j) => write!(f, "eq:{j}"),
        }
    }
}

impl FromStr for IrfMethod {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        if let Some(j) = s.strip_prefix("eq:") {
            return j.parse().map(IrfMethod::Eq).map_err(|_| ());
        }
        let rest = s.strip_prefix("put:").ok_or(())?;
        let (i, u) = rest.split_once(':').ok_or(())?;
        let i = i.parse().map_err(|_| ())?;
        let u = u.parse().map_err(|_| ())?;
        Ok(IrfMethod::Put(i, u))
    }
}

impl IrfMethod {
    /// The basic instruction `irf.<method>` issuing this request.
    pub fn instruction(&self, focus: &str) -> Basic {
        Basic::with_focus(focus, &self.to_string()).expect("method strings re-parse")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IrfState {
    State(RegisterFileState),
    Undef,
}

/// The instruction register file service over a fixed configuration.
#[derive(Clone, Debug)]
pub struct IrfService {
    cfg: IrfConfig,
    initial: IrfState,
}

impl IrfService {
    pub fn new(cfg: IrfConfig, initial: IrfState) -> Result<Self> {
        if let IrfState::State(sigma) = &initial {
            if !cfg.contains(sigma) {
                return Err(Error::OutsideIrfs(format!("{{{sigma}}}")));
            }
        }
        cfg.card()?;
        Ok(Self { cfg, initial })
    }

    pub fn config(&self) -> &IrfConfig {
        &self.cfg
    }

    /// Parses a method and checks it against the configuration; anything
    /// else is outside the service's method set.
    fn method(&self, method: &str) -> Option<IrfMethod> {
        let m: IrfMethod = method.parse().ok()?;
        let ok = match &m {
            IrfMethod::Put(i, u) => {
                (1..=self.cfg.registers).contains(i) && self.cfg.alphabet.contains(u)
            }
            IrfMethod::Eq(j) => *j >= 1 && *j <= self.cfg.card().unwrap_or(0),
        };
        ok.then_some(m)
    }
}

impl Service for IrfService {
    type State = IrfState;

    fn initial_state(&self) -> IrfState {
        self.initial.clone()
    }

    fn effect(&self, method: &str, state: &IrfState) -> IrfState {
        let IrfState::State(sigma) = state else {
            return IrfState::Undef;
        };
        match self.method(method) {
            Some(IrfMethod::Put(i, u)) => IrfState::State(sigma.with(i, u)),
            Some(IrfMethod::Eq(_)) => state.clone(),
            None => IrfState::Undef,
        }
    }

    fn reply(&self, method: &str, state: &IrfState) -> Reply {
        let IrfState::State(sigma) = state else {
            return Reply::Blocked;
        };
        match self.method(method) {
            Some(IrfMethod::Put(..)) => Reply::True,
            Some(IrfMethod::Eq(j)) => {
                if theta(&self.cfg, sigma).expect("states stay inside IRFS") == j {
                    Reply::True
                } else {
                    Reply::False
                }
            }
            None => Reply::Blocked,
        }
    }
}

/// `g /focus H`: every action `focus.m` is answered by the service and
/// becomes `tau` (or `D` when blocked); everything else is kept, with the
/// service state passed along both branches.
pub fn use_service<H: Service>(g: &ThreadGraph, focus: &str, svc: &H) -> ThreadGraph {
    let mut builder = Builder::new();
    let mut ids: HashMap<(usize, H::State), usize> = HashMap::new();
    let mut work = Vec::new();

    let mut state = |node: usize, s: &H::State, builder: &mut Builder, work: &mut Vec<_>| {
        *ids.entry((node, s.clone())).or_insert_with(|| {
            let id = builder.reserve();
            work.push((node, s.clone(), id));
            id
        })
    };

    let root = state(g.root(), &svc.initial_state(), &mut builder, &mut work);
    while let Some((node, s, id)) = work.pop() {
        let out = match g.node(node) {
            Node::Stop => Node::Stop,
            Node::Dead => Node::Dead,
            Node::Post {
                action: Action::Basic(b),
                on_true,
                on_false,
            } if b.focus() == Some(focus) => {
                let next = svc.effect(b.method(), &s);
                let branch = match svc.reply(b.method(), &s) {
                    Reply::True => Some(*on_true),
                    Reply::False => Some(*on_false),
                    Reply::Blocked => None,
                };
                match branch {
                    Some(target) => {
                        let n = state(target, &next, &mut builder, &mut work);
                        Node::Post {
                            action: Action::TAU,
                            on_true: n,
                            on_false: n,
                        }
                    }
                    None => Node::Dead,
                }
            }
            Node::Post {
                action,
                on_true,
                on_false,
            } => {
                let t = state(*on_true, &s, &mut builder, &mut work);
                let f = state(*on_false, &s, &mut builder, &mut work);
                Node::Post {
                    action: action.clone(),
                    on_true: t,
                    on_false: f,
                }
            }
        };
        builder.set(id, out);
    }
    builder.finish(root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thread::bisimilar;
    use proptest::prelude::*;

    fn cfg1() -> IrfConfig {
        IrfConfig::new(1, [CoreInstr::Jump(1)])
    }

    fn sigma(s: &str) -> RegisterFileState {
        s.parse().unwrap()
    }

    fn g(text: &str) -> ThreadGraph {
        text.parse().unwrap()
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta(&cfg1(), &sigma("")).unwrap(), 1);
        assert_eq!(theta(&cfg1(), &sigma("1=#1")).unwrap(), 2);
        assert_eq!(theta(&IrfConfig::new(0, []), &sigma("")).unwrap(), 1);
        assert!(theta(&cfg1(), &sigma("2=#1")).is_err());
        assert!(theta(&cfg1(), &sigma("1=!")).is_err());
    }

    #[test]
    fn theta_register_one_is_most_significant() {
        let cfg = IrfConfig::new(2, [CoreInstr::Halt, CoreInstr::Jump(1)]);
        assert_eq!(cfg.card().unwrap(), 9);
        let order: Vec<String> = cfg.states().unwrap().map(|s| s.to_string()).collect();
        assert_eq!(
            order,
            [
                "",
                "2=#1",
                "2=!",
                "1=#1",
                "1=#1,2=#1",
                "1=#1,2=!",
                "1=!",
                "1=!,2=#1",
                "1=!,2=!"
            ]
        );
    }

    #[test]
    fn card_overflow_is_reported() {
        let cfg = IrfConfig::new(200, [CoreInstr::Halt, CoreInstr::Jump(1)]);
        assert!(matches!(cfg.card(), Err(Error::StateSpaceTooLarge(_))));
    }

    #[test]
    fn irf_service_examples() {
        let svc = IrfService::new(cfg1(), IrfState::State(sigma(""))).unwrap();
        let s0 = svc.initial_state();
        assert_eq!(svc.reply("eq:1", &s0), Reply::True);
        assert_eq!(svc.effect("eq:1", &s0), s0);
        let s1 = svc.effect("put:1:{#1}", &s0);
        assert_eq!(svc.reply("eq:1", &s1), Reply::False);
        assert_eq!(svc.reply("eq:2", &s1), Reply::True);
        assert_eq!(svc.reply("foo", &s0), Reply::Blocked);
        let undef = svc.effect("foo", &s0);
        assert_eq!(undef, IrfState::Undef);
        assert_eq!(svc.reply("put:1:{#1}", &undef), Reply::Blocked);
    }

    #[test]
    fn out_of_config_methods_block() {
        let svc = IrfService::new(cfg1(), IrfState::State(sigma(""))).unwrap();
        let s0 = svc.initial_state();
        assert_eq!(svc.reply("put:2:{#1}", &s0), Reply::Blocked);
        assert_eq!(svc.reply("put:1:{!}", &s0), Reply::Blocked);
        assert_eq!(svc.reply("eq:3", &s0), Reply::Blocked);
    }

    #[test]
    fn use_examples() {
        let svc = IrfService::new(cfg1(), IrfState::State(sigma(""))).unwrap();
        assert_eq!(
            use_service(&ThreadGraph::stop(), "irf", &svc),
            ThreadGraph::stop()
        );
        let used = use_service(&g("0: irf.eq:1 -> 1, 2\n1: S\n2: D"), "irf", &svc);
        assert_eq!(used, ThreadGraph::prefix(Action::TAU, &ThreadGraph::stop()));
        let foreign = g("0: other.m -> 1, 2\n1: S\n2: D");
        assert!(bisimilar(&use_service(&foreign, "irf", &svc), &foreign));
    }

    #[test]
    fn use_follows_put_then_eq() {
        let svc = IrfService::new(cfg1(), IrfState::State(sigma(""))).unwrap();
        let t = g("0: irf.put:1:{#1} -> 1, 1\n1: irf.eq:2 -> 2, 3\n2: S\n3: D");
        let expected = g("0: tau -> 1, 1\n1: tau -> 2, 2\n2: S");
        assert!(bisimilar(&use_service(&t, "irf", &svc), &expected));
    }

    fn arb_method() -> impl Strategy<Value = String> {
        prop_oneof![
            (0usize..3, prop_oneof![Just("#1"), Just("!"), Just("a")])
                .prop_map(|(i, u)| format!("put:{i}:{{{u}}}")),
            (0usize..6).prop_map(|j| format!("eq:{j}")),
            Just("foo".to_string()),
        ]
    }

    proptest! {
        #[test]
        fn blocked_is_absorbing(methods in proptest::collection::vec(arb_method(), 0..20)) {
            let cfg = IrfConfig::new(2, [CoreInstr::Jump(1), CoreInstr::Halt]);
            let svc = IrfService::new(cfg, IrfState::State(RegisterFileState::new())).unwrap();
            let mut s = svc.initial_state();
            let mut blocked = false;
            for m in &methods {
                let r = svc.reply(m, &s);
                if blocked {
                    prop_assert_eq!(r, Reply::Blocked);
                }
                blocked |= r == Reply::Blocked;
                s = svc.effect(m, &s);
            }
        }

        #[test]
        fn theta_is_a_bijection(n in 0usize..4, k in 0usize..3) {
            let alphabet = [CoreInstr::Halt, CoreInstr::Jump(1), CoreInstr::Jump(2)];
            let cfg = IrfConfig::new(n, alphabet[..k].iter().cloned());
            for (j, s) in cfg.states().unwrap().enumerate() {
                prop_assert_eq!(theta(&cfg, &s).unwrap(), j + 1);
            }
        }
    }
}
