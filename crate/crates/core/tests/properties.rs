use polyseq::gen::{self, InstanceShape};
use polyseq::synthesis::IRF;
use polyseq::{
    abstract_internal, bisimilar, derive_registry, extract, extract_polyadic, generate, minimize,
    pga_to_pglc, pglc_to_pga, pglc_to_pgld, pgld_behaviour, stream_to_pglc, synthesize, theta_inv,
    use_service, Action, CoreInstr, FragmentVector, Instr, InstructionStream, Internal, IrfService,
    IrfState, Node, PgaTerm, PglcProgram, PgldInstr, PgldProgram, RegisterFileState, ThreadGraph,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn print_parse_round_trip_per_notation() {
    let mut r = rng(1);
    for _ in 0..1000 {
        let t = gen::pga_term(&mut r, 12);
        assert_eq!(t.to_string().parse::<PgaTerm>().unwrap(), t);
        let s = t.normalize();
        assert_eq!(s.to_string().parse::<InstructionStream>().unwrap(), s);

        let p = gen::pgld(&mut r, 20);
        assert_eq!(p.to_string().parse::<PgldProgram>().unwrap(), p);

        let c = gen::pglc(&mut r, 20);
        assert_eq!(c.to_string().parse::<PglcProgram>().unwrap(), c);

        let (main, alpha) = gen::theorem1_instance(&mut r, &InstanceShape::default());
        assert_eq!(main.to_string().parse::<InstructionStream>().unwrap(), main);
        assert_eq!(alpha.to_string().parse::<FragmentVector>().unwrap(), alpha);

        let g = gen::graph(&mut r, 8);
        assert_eq!(g.to_string().parse::<ThreadGraph>().unwrap(), g);
    }
}

#[test]
fn concatenated_blocks_keep_their_meaning() {
    let mut r = rng(2);
    for _ in 0..300 {
        let t1 = gen::pga_term(&mut r, 8);
        let t2 = gen::pga_term(&mut r, 8);
        let b1 = pga_to_pglc(&t1);
        let b2 = pga_to_pglc(&t2);
        let joined = PglcProgram::concat([&b1, &b2]).unwrap();
        let alone = pgld_behaviour(&pglc_to_pgld(&b1).unwrap()).unwrap();
        let inside = pgld_behaviour(&pglc_to_pgld(&joined).unwrap()).unwrap();
        assert!(bisimilar(&alone, &inside), "{t1} followed by {t2}");
    }
}

#[test]
fn pglc_projection_matches_direct_semantics_of_closed_blocks() {
    let mut r = rng(3);
    for _ in 0..300 {
        let t = gen::pga_term(&mut r, 8);
        let block = pga_to_pglc(&t);
        let back = extract(&pglc_to_pga(&block).normalize()).unwrap();
        assert!(bisimilar(&back, &extract(&t.normalize()).unwrap()), "{t}");
    }
}

#[test]
fn supplementary_free_main_degenerates_to_plain_extraction() {
    let mut r = rng(4);
    for _ in 0..300 {
        let s = gen::pga_term(&mut r, 10).normalize();
        let g = extract_polyadic(&s, &RegisterFileState::new(), &FragmentVector::default());
        assert!(bisimilar(&g, &extract(&s).unwrap()), "{s}");
    }
}

#[test]
fn unread_registers_do_not_matter() {
    // nothing ever reads register 3
    let main: InstructionStream = "put(1,{#1});+a;@1;@2".parse().unwrap();
    let alpha: FragmentVector = "D: get(1);b;put(2,{!});@2\nD: get(2);##0".parse().unwrap();
    let plain = RegisterFileState::new();
    let noisy: RegisterFileState = "3=#4".parse().unwrap();
    assert!(bisimilar(
        &extract_polyadic(&main, &plain, &alpha),
        &extract_polyadic(&main, &noisy, &alpha)
    ));
}

fn with_focus_actions(g: &ThreadGraph, focus: &str) -> usize {
    g.actions()
        .filter(|a| matches!(a, Action::Basic(b) if b.focus() == Some(focus)))
        .count()
}

#[test]
fn use_removes_focus_and_is_idempotent() {
    let mut r = rng(5);
    for _ in 0..200 {
        let (main, alpha) = gen::theorem1_instance(&mut r, &InstanceShape::default());
        let report = synthesize(&main, &alpha).unwrap();
        let g = extract(&polyseq::pgld_to_pga(&report.program).normalize()).unwrap();
        let sigma = gen::register_file(&mut r, &report.config);
        let svc = IrfService::new(report.config.clone(), IrfState::State(sigma)).unwrap();
        let once = use_service(&g, IRF, &svc);
        assert_eq!(with_focus_actions(&once, IRF), 0);
        let twice = use_service(&once, IRF, &svc);
        assert!(bisimilar(&once, &twice));
    }
}

#[test]
fn internal_abstractions_commute() {
    let mut r = rng(6);
    for _ in 0..100 {
        let g = gen::graph(&mut r, 10);
        let tg = abstract_internal(Internal::Gnl, &abstract_internal(Internal::Tau, &g));
        let gt = abstract_internal(Internal::Tau, &abstract_internal(Internal::Gnl, &g));
        assert_eq!(minimize(&tg), minimize(&gt), "{g}");
    }
}

#[test]
fn layout_matches_program() {
    let mut r = rng(7);
    for _ in 0..200 {
        let (main, alpha) = gen::theorem1_instance(&mut r, &InstanceShape::default());
        let report = synthesize(&main, &alpha).unwrap();
        let l = &report.layout;
        assert_eq!(report.program.len(), l.program_len());
        for i in 1..=l.n {
            assert_eq!(
                report.program.at(l.table_offset(i) + 1).to_string(),
                "+irf.eq:1"
            );
            for j in 1..=l.n_prime {
                let sigma = theta_inv(&report.config, j).unwrap();
                let block = pglc_to_pgld(&stream_to_pglc(&generate(&alpha, i, &sigma))).unwrap();
                let offset = l.instance_offset(i, j);
                let expected = match &block.instrs()[0] {
                    PgldInstr::Jump(0) => PgldInstr::Jump(0),
                    PgldInstr::Jump(t) => PgldInstr::Jump(t + offset),
                    other => other.clone(),
                };
                let actual = report.program.at(offset + 1);
                match expected {
                    PgldInstr::Swo(_) | PgldInstr::Put(..) | PgldInstr::Get(_) => {}
                    e => assert_eq!(actual, &e, "instance ({i},{j})"),
                }
            }
        }
    }
}

#[test]
fn dispatch_never_falls_through_a_table() {
    let mut r = rng(8);
    for _ in 0..100 {
        let (main, alpha) = gen::theorem1_instance(&mut r, &InstanceShape::default());
        let report = synthesize(&main, &alpha).unwrap();
        if report.layout.n == 0 {
            continue;
        }
        let n_prime = report.layout.n_prime;
        let g = extract(&polyseq::pgld_to_pga(&report.program).normalize()).unwrap();
        for sigma in report.config.states().unwrap() {
            let svc = IrfService::new(report.config.clone(), IrfState::State(sigma)).unwrap();
            let used = use_service(&g, IRF, &svc);
            // a table that runs past its last test would reach `eq:n'+1`,
            // which the service blocks; no such method exists in the program
            let beyond = format!("eq:{}", n_prime + 1);
            assert!(g.actions().all(|a| !a.to_string().ends_with(&beyond)));
            assert!(used.nodes().iter().all(|n| !matches!(n, Node::Post { action: Action::Basic(b), .. } if b.focus() == Some(IRF))));
        }
    }
}

#[test]
fn derived_config_bounds_irfs() {
    let mut r = rng(9);
    for _ in 0..200 {
        let (main, alpha) = gen::theorem1_instance(&mut r, &InstanceShape::default());
        let cfg = derive_registry(&main, &alpha);
        assert!(cfg.card().unwrap() <= 9);
        let supplementary = main.instrs().filter(|u| u.is_supplementary()).count();
        if supplementary == 0 && alpha.is_empty() {
            assert_eq!(cfg.registers(), 0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn switch_discards_continuation(seed in any::<u64>(), junk in 0usize..4) {
        let mut r = rng(seed);
        let (main, alpha) = gen::theorem1_instance(&mut r, &InstanceShape::default());
        let Some(at) = main.prefix().iter().position(|u| matches!(u, Instr::Swo(_))) else {
            return Ok(());
        };
        // tests and jumps could step over the switch-over into the padding
        let cut: Vec<Instr> = main.prefix()[..=at]
            .iter()
            .filter(|u| !matches!(u, Instr::Core(CoreInstr::PosTest(_) | CoreInstr::NegTest(_) | CoreInstr::Jump(_))))
            .cloned()
            .collect();
        let mut padded = cut.clone();
        padded.extend((0..junk).map(|_| Instr::plain("z")));
        let cut = InstructionStream::finite(cut).unwrap();
        let padded = InstructionStream::finite(padded).unwrap();
        let sigma = RegisterFileState::new();
        prop_assert!(bisimilar(
            &extract_polyadic(&cut, &sigma, &alpha),
            &extract_polyadic(&padded, &sigma, &alpha)
        ));
    }

    #[test]
    fn theorem1_for_random_register_files(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (main, alpha) = gen::theorem1_instance(&mut r, &InstanceShape::default());
        let cfg = derive_registry(&main, &alpha);
        let sigma = gen::register_file(&mut r, &cfg);
        prop_assert!(polyseq::check_theorem1(&main, &alpha, &sigma).unwrap(), "{main}\n{alpha}{sigma}");
    }
}
