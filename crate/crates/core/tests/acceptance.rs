//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};

use argq::baf::{baf_compose, literal_node, neg_node};
use argq::bipolar::{compile_theory, d_index, ground_labelling, priority, DIndex, DefeasibleTheory, Priority};
use argq::cdnet::{eliminate_joint_attacks, np_extensions, stable_only, CDNetwork, NodeSet};
use argq::frames::{enumerate_complete_labellings, extension_of, grounded_labelling};
use argq::io::Document;
use argq::kleene::{
    equational_extensions, node_equations, solve_equations, to_kleene_dnf, Domain, EquationSystem, Formula,
};
use argq::monadic::{self, FiniteModel, MFormula, Term};
use argq::pipeline::{
    distinct_labellings, monadic_pattern_network, negation_embedding, oracle_extensions, pipeline_extensions,
    InstantiatedFrame,
};
use argq::topnet::{option_i_extensions, option_ii_extensions, option_iv_extensions, Policy, TopNet};
use argq::{ArgFrame, Labelling, Tri, TOP};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lab(pairs: &[(&str, Tri)]) -> Labelling {
    pairs.iter().map(|(n, v)| (*n, *v)).collect()
}

fn set(items: Vec<Labelling>) -> BTreeSet<Labelling> {
    items.into_iter().collect()
}

fn doc(text: &str) -> Document {
    Document::parse(text).expect("fixture parses")
}

use Tri::{Half, One, Zero};

fn criterion_1() -> Outcome {
    let cycle = doc("att x y\natt y x\n").frame().unwrap();
    let got = set(enumerate_complete_labellings(&cycle));
    let want =
        set(vec![lab(&[("x", One), ("y", Zero)]), lab(&[("x", Zero), ("y", One)]), lab(&[("x", Half), ("y", Half)])]);
    check(got == want, || format!("two-cycle gave {got:?}"))?;
    let chain = doc("att x y\natt y z\n").frame().unwrap();
    let g = grounded_labelling(&chain);
    check(g == lab(&[("x", One), ("y", Zero), ("z", One)]), || format!("chain grounded {g}"))
}

fn criterion_2() -> Outcome {
    let frame = doc("att T(l) T(d)\natt T(d) T(l)\natt T(d) T(d)\n").frame().unwrap();
    let inst = InstantiatedFrame::identity(frame).unwrap();
    let want = set(vec![lab(&[("T(d)", Zero), ("T(l)", One)]), lab(&[("T(d)", Half), ("T(l)", Half)])]);
    let oracle = set(distinct_labellings(&oracle_extensions(&inst)));
    check(oracle == want, || format!("oracle gave {oracle:?}"))?;
    let pipe = pipeline_extensions(&inst, Policy::LENIENT).map_err(|e| e.to_string())?;
    let pipe = set(distinct_labellings(&pipe));
    check(pipe == want, || format!("pipeline gave {pipe:?}"))?;
    let eq: BTreeSet<Labelling> =
        equational_extensions(&inst).iter().map(|v| inst.labelling_under(v).unwrap()).collect();
    check(eq == want, || format!("equational route gave {eq:?}"))
}

fn criterion_3() -> Outcome {
    // The two-state equations as printed for the figure.
    let printed = EquationSystem::parse(
        "⊤ == ⊤
         ¬A(J) == ⊥ ∧ ¬A(J)
         A(J) == ¬¬A(J) ∧ ¬(¬A(J) ∧ ¬A(M))
         ¬A(J) ∧ ¬A(M) == ¬(A(J) ∨ A(M))
         A(J) ∨ A(M) == ¬A(J) ∧ ¬(¬A(J) ∧ ¬A(M))
         A(M) == ¬(A(J) ∨ A(M)) ∧ ¬¬A(M) ∧ ¬(¬A(J) ∧ ¬A(M))
         ¬A(M) == ¬A(M)",
    )
    .unwrap();
    let sols = solve_equations(&printed, Domain::ThreeValued);
    let want = vec![lab(&[("A(J)", Zero), ("A(M)", Zero)])];
    let first =
        check(sols == want, || format!("two-state system: expected the single solution A(J)=A(M)=0, got {sols:?}"));
    let chain =
        doc("att x y\natt y z\ninst x := A(J)\ninst y := A(J) | A(M)\ninst z := A(M)\n").instantiated().unwrap();
    let direct = solve_equations(&node_equations(&chain), Domain::ThreeValued);
    let printed_f1c = EquationSystem::parse("A(J) == ⊤\nA(J) ∨ A(M) == ¬A(J)\nA(M) == ¬(A(J) ∨ A(M))").unwrap();
    let printed_sols = solve_equations(&printed_f1c, Domain::ThreeValued);
    let second = check(direct.is_empty() && printed_sols.is_empty(), || {
        format!("pre-two-state system should be unsolvable, got {direct:?} / {printed_sols:?}")
    });
    match (first, second) {
        (Ok(()), Ok(())) => Ok(()),
        (a, b) => Err([a.err(), b.err()].into_iter().flatten().collect::<Vec<_>>().join("; ")),
    }
}

fn criterion_4() -> Outcome {
    let tf7 = doc("top\natt x a\natt a b\natt b a\natt b TOP\natt z y\natt y z\natt z TOP\n").topnet().unwrap();
    let lc = lab(&[("x", One), ("a", Zero), ("b", Zero), (TOP, One), ("z", Zero), ("y", One)]);
    let ii = option_ii_extensions(&tf7);
    check(ii.contains(&lc), || format!("option (ii) lacks the counter-attack labelling: {ii:?}"))?;
    let lenient = option_iv_extensions(&tf7, Policy::LENIENT);
    let want = lab(&[("x", One), ("a", Zero), ("b", One), (TOP, One), ("z", Zero), ("y", One)]);
    check(lenient == vec![want], || format!("option (iv) lenient gave {lenient:?}"))?;
    let strict = option_iv_extensions(&tf7, Policy::STRICT);
    check(strict.is_empty(), || format!("option (iv) strict gave {strict:?}"))?;
    let tf2 = doc("top\nnode x\natt x TOP\n").topnet().unwrap();
    let i = option_i_extensions(&tf2);
    check(i.is_empty(), || format!("option (i) on the toxic pair gave {i:?}"))
}

/// Random formula of depth at most `depth` over `atoms`.
fn random_formula(rng: &mut ChaCha8Rng, atoms: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return Formula::atom(atoms[rng.gen_range(0..atoms.len())]);
    }
    let a = random_formula(rng, atoms, depth - 1);
    match rng.gen_range(0..4) {
        0 => a.not(),
        1 => a.and(random_formula(rng, atoms, depth - 1)),
        2 => a.or(random_formula(rng, atoms, depth - 1)),
        _ => a.imp(random_formula(rng, atoms, depth - 1)),
    }
}

/// Every frame over `n` nodes named `s0..`.
fn all_frames(n: usize) -> impl Iterator<Item = ArgFrame> {
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    (0u32..1 << (n * n)).map(move |mask| {
        let attacks: Vec<(String, String)> =
            (0..n * n).filter(|k| mask >> k & 1 == 1).map(|k| (names[k / n].clone(), names[k % n].clone())).collect();
        ArgFrame::new(names.clone(), attacks).unwrap()
    })
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let atoms = ["p", "q", "r"];
    let mut instances = 0;
    let mut divergent = Vec::new();
    for n in 1..=3 {
        for frame in all_frames(n) {
            let inst: BTreeMap<String, Formula> =
                frame.nodes().iter().map(|x| (x.clone(), random_formula(&mut rng, &atoms, 2))).collect();
            let inst = InstantiatedFrame::new(frame, inst).unwrap();
            let oracle: BTreeSet<_> = oracle_extensions(&inst).into_iter().collect();
            let pipe: BTreeSet<_> = match pipeline_extensions(&inst, Policy::LENIENT) {
                Ok(p) => p.into_iter().collect(),
                Err(e) => return Err(format!("pipeline error: {e}")),
            };
            instances += 1;
            if oracle != pipe {
                divergent.push(inst);
            }
        }
    }
    check(instances >= 200 && divergent.is_empty(), || {
        let first = &divergent[0];
        let desc: Vec<String> = first.instantiation().iter().map(|(x, f)| format!("{x}:{f}")).collect();
        format!(
            "{} of {instances} instances diverge; first: attacks {:?}, {}",
            divergent.len(),
            first.frame().attacks().collect::<Vec<_>>(),
            desc.join(", ")
        )
    })
}

/// Closed propositional formulas of depth at most 2 over `atoms`.
fn formulas_to_depth_2(atoms: &[&str]) -> Vec<Formula> {
    let mut d0: Vec<Formula> = atoms.iter().map(|a| Formula::atom(*a)).collect();
    d0.extend([Formula::Top, Formula::Bot]);
    let grow = |base: &[Formula]| {
        let mut out: Vec<Formula> = base.to_vec();
        for a in base {
            out.push(a.clone().not());
            for b in base {
                out.push(a.clone().and(b.clone()));
                out.push(a.clone().or(b.clone()));
                out.push(a.clone().imp(b.clone()));
            }
        }
        out
    };
    let d1 = grow(&d0);
    let mut d2 = grow(&d1);
    d2.sort_by_key(|f| f.to_string());
    d2.dedup();
    d2
}

/// External attackers: an unattacked node (value 1) or a self-attacking one (value ½).
#[derive(Clone, Copy, Debug)]
enum Driver {
    In,
    Undecided,
}

fn contract_host(phi: &Formula, pattern: &[(Driver, String)]) -> (TopNet, String, argq::baf::Baf) {
    let baf = baf_compose("f", phi).unwrap();
    let mut nodes: BTreeSet<String> = BTreeSet::from([TOP.to_string()]);
    let mut attacks: BTreeSet<(String, String)> = BTreeSet::new();
    for q in ["p", "q", "r"] {
        nodes.insert(q.to_string());
        nodes.insert(neg_node(q));
        attacks.insert((q.to_string(), neg_node(q)));
        attacks.insert((neg_node(q), q.to_string()));
    }
    nodes.extend(baf.nodes());
    attacks.extend(baf.attacks().iter().cloned());
    for (k, (driver, target)) in pattern.iter().enumerate() {
        let c = format!("ext{k}");
        nodes.insert(c.clone());
        if let Driver::Undecided = driver {
            attacks.insert((c.clone(), c.clone()));
        }
        let t = if target == "in" { baf.in_node().to_string() } else { target.clone() };
        attacks.insert((c, t));
    }
    let frame = ArgFrame::new(nodes, attacks).unwrap();
    let out = baf.out_node().to_string();
    (TopNet::new(frame, TOP).unwrap(), out, baf)
}

fn criterion_6() -> Outcome {
    let atoms = ["p", "q", "r"];
    let formulas = formulas_to_depth_2(&atoms);
    let vars: BTreeSet<String> = atoms.iter().map(|a| a.to_string()).collect();
    // Formations depend on the formula only through its Kleene DNF, which must
    // agree with the formula on every valuation.
    let mut by_dnf: BTreeMap<Vec<_>, Formula> = BTreeMap::new();
    for phi in &formulas {
        let dnf = to_kleene_dnf(phi).map_err(|e| e.to_string())?;
        let back = Formula::or_all(dnf.iter().map(|c| {
            Formula::and_all(c.iter().map(|(q, pos)| if *pos { Formula::atom(q) } else { Formula::atom(q).not() }))
        }));
        for v in argq::kleene::enumerate_valuations(&vars) {
            if phi.eval(&v).unwrap() != back.eval(&v).unwrap() {
                return Err(format!("normal form of {phi} differs at {v}"));
            }
        }
        by_dnf.entry(dnf).or_insert_with(|| phi.clone());
    }
    let mut targets = vec!["in".to_string()];
    for q in atoms {
        targets.push(literal_node(q, true));
        targets.push(literal_node(q, false));
    }
    let drivers: Vec<(Driver, String)> =
        targets.iter().flat_map(|t| [(Driver::In, t.clone()), (Driver::Undecided, t.clone())]).collect();
    let mut patterns: Vec<Vec<(Driver, String)>> = vec![vec![]];
    for (i, a) in drivers.iter().enumerate() {
        patterns.push(vec![a.clone()]);
        for b in &drivers[i + 1..] {
            patterns.push(vec![a.clone(), b.clone()]);
        }
    }
    for phi in by_dnf.values() {
        for pat in &patterns {
            let (net, out, baf) = contract_host(phi, pat);
            for lam in option_iv_extensions(&net, Policy::LENIENT) {
                let psi = baf.psi(&lam).unwrap();
                if lam.at(&out) != psi {
                    return Err(format!("{phi} under {pat:?}: out={} but formula={psi} in {lam}", lam.at(&out)));
                }
            }
        }
    }
    bbl15_cases()
}

/// The three cases for the conjunction formation with `n` literals, driven by
/// an external attacker α of its in node.
fn bbl15_cases() -> Outcome {
    for n in 1..=3 {
        let atoms: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
        let lits: Vec<(String, bool)> = atoms.iter().map(|a| (a.clone(), true)).collect();
        let baf = argq::baf::baf_conj("c", &lits).unwrap();
        for alpha in [One, Zero, Half] {
            let mut nodes: BTreeSet<String> = baf.nodes();
            nodes.insert(TOP.to_string());
            nodes.insert("alpha".into());
            let mut attacks: BTreeSet<(String, String)> = baf.attacks().clone();
            attacks.insert(("alpha".into(), baf.in_node().to_string()));
            match alpha {
                Zero => {
                    nodes.insert("kill".into());
                    attacks.insert(("kill".into(), "alpha".into()));
                }
                Half => {
                    attacks.insert(("alpha".into(), "alpha".into()));
                }
                One => {}
            }
            let net = TopNet::new(ArgFrame::new(nodes, attacks).unwrap(), TOP).unwrap();
            let exts = option_iv_extensions(&net, Policy::LENIENT);
            if exts.is_empty() {
                return Err(format!("n={n}, α={alpha}: no extension"));
            }
            for lam in exts {
                let w = lam.at(baf.out_node());
                let vals: Vec<Tri> = atoms.iter().map(|a| lam.at(a)).collect();
                let ok = match alpha {
                    One => w == Zero && vals.contains(&Zero),
                    Zero => w == One && vals.iter().all(|&v| v == One),
                    Half => vals.iter().all(|&v| v < One) && (w == Half || (w == Zero && vals.contains(&Zero))),
                };
                if !ok {
                    return Err(format!("n={n}, α={alpha}: w={w}, a={vals:?}"));
                }
            }
        }
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let names = ["a", "~a", "b", "~b", "g", "~g", TOP];
    let pairs = [("a", "~a"), ("~a", "a"), ("b", "~b"), ("~b", "b"), ("g", "~g"), ("~g", "g")];
    let tops = [(TOP, "~a"), (TOP, "~b"), (TOP, "~g")];
    let base = ArgFrame::new(names, pairs.iter().chain(&tops).copied()).unwrap();
    let joint = vec![(NodeSet::from(["a".to_string(), "b".to_string()]), "g".to_string())];
    let reduced = eliminate_joint_attacks(&base, &joint).unwrap();
    let good: Vec<Labelling> =
        enumerate_complete_labellings(&reduced).into_iter().map(|l| l.restrict(|n| names.contains(&n))).collect();
    check(!good.is_empty() && good.iter().all(|l| l.at("g") == Zero), || format!("fresh reduction gave {good:?}"))?;
    let wrong_edges = [("~a", "~g"), ("~b", "~g")];
    let wrong = ArgFrame::new(names, pairs.iter().chain(&tops).chain(&wrong_edges).copied()).unwrap();
    let bad = enumerate_complete_labellings(&wrong);
    check(bad.iter().any(|l| l.at("g") == One), || "the reuse reduction no longer shows g in".into())?;
    check(good.iter().all(|l| l.at("g") != One), || "fresh reduction produced g in".into())?;
    let ab = NodeSet::from(["a".to_string(), "b".to_string()]);
    let bf12 = CDNetwork::new(["a", "b"], [(ab.clone(), ab)]).unwrap();
    let stable = stable_only(&np_extensions(&bf12).map_err(|e| e.to_string())?);
    let want = vec![lab(&[("a", Zero), ("b", One)]), lab(&[("a", One), ("b", Zero)])];
    check(stable == want, || format!("set attack on itself: stable labellings {stable:?}"))
}

/// Closed monadic formulas over `P`, `Q` with one variable, up to depth 2
/// above the quantifier.
fn monadic_formulas() -> Vec<MFormula> {
    let x = || Term::Var("x".into());
    let bodies = {
        let lits = vec![MFormula::pred("P", x()), MFormula::pred("Q", x())];
        let mut b = lits.clone();
        for l in &lits {
            b.push(l.clone().not());
        }
        for l in &lits {
            for m in &lits {
                b.push(l.clone().and(m.clone().not()));
                b.push(l.clone().or(m.clone()));
            }
        }
        b
    };
    let mut quantified = Vec::new();
    for body in &bodies {
        quantified.push(MFormula::exists("x", body.clone()));
        quantified.push(MFormula::forall("x", body.clone()));
    }
    let mut out = quantified.clone();
    for (i, a) in quantified.iter().enumerate() {
        out.push(a.clone().not());
        for b in quantified.iter().skip(i + 1).step_by(3) {
            out.push(a.clone().and(b.clone()));
            out.push(a.clone().or(b.clone().not()));
        }
    }
    out
}

fn criterion_8() -> Outcome {
    for n in 1..=2usize {
        let preds: Vec<String> = ["P", "Q"][..n].iter().map(|s| s.to_string()).collect();
        let formulas: Vec<MFormula> =
            monadic_formulas().into_iter().filter(|f| f.predicates().iter().all(|p| preds.contains(p))).collect();
        let nfs: Vec<Vec<monadic::TypeSet>> =
            formulas.iter().map(|f| monadic::normal_form(f, &preds).unwrap()).collect();
        let max = 1usize << n;
        for size in 1..=max {
            let domain: Vec<String> = (0..size).map(|i| format!("e{i}")).collect();
            // Every interpretation: each element gets one of the 2^n types.
            let mut code = vec![0usize; size];
            loop {
                let mut ext: BTreeMap<String, BTreeSet<String>> =
                    preds.iter().map(|p| (p.clone(), BTreeSet::new())).collect();
                for (e, &t) in domain.iter().zip(&code) {
                    for (k, p) in preds.iter().enumerate() {
                        if t >> k & 1 == 1 {
                            ext.get_mut(p).unwrap().insert(e.clone());
                        }
                    }
                }
                let m = FiniteModel::new(domain.iter().cloned().collect(), ext, BTreeMap::new()).unwrap();
                let realized = m.realized(&preds);
                for (f, nf) in formulas.iter().zip(&nfs) {
                    let truth = monadic::eval_model(&m, f).unwrap();
                    if truth != nf.contains(&realized) {
                        return Err(format!("normal form of {f} wrong on a model of size {size}"));
                    }
                }
                let mut i = 0;
                while i < size {
                    code[i] += 1;
                    if code[i] < max {
                        break;
                    }
                    code[i] = 0;
                    i += 1;
                }
                if i == size {
                    break;
                }
            }
        }
    }
    let f1b = doc("att x y\natt y z\ninst x := A(J)\ninst y := ∃xA(x)\ninst z := A(M)\n");
    let (net, _) =
        monadic_pattern_network(&f1b.frame().unwrap(), &f1b.monadic().unwrap()).map_err(|e| e.to_string())?;
    let exts: Vec<BTreeSet<String>> = enumerate_complete_labellings(&net).iter().map(extension_of).collect();
    let want: BTreeSet<String> = [TOP, "~y", "~z"].iter().map(|s| s.to_string()).collect();
    check(exts.contains(&want), || format!("pattern network extensions {exts:?}"))
}

fn criterion_9() -> Outcome {
    let ee1 = DefeasibleTheory::parse(
        "fact: a\nfact: d\nfact: g\nstrict: b, c, e, f -> ~g\n\
         defeasible: a => b\ndefeasible: b => c\ndefeasible: e => f\ndefeasible: d => e\n",
    )
    .unwrap();
    let net = compile_theory(&ee1).unwrap();
    let g = ground_labelling(&net);
    let ins: BTreeSet<&str> = g
        .labelling
        .iter()
        .filter(|(n, v)| *v == One && !net.aux().iter().any(|z| n == z || *n == format!("~{z}")))
        .map(|(n, _)| n)
        .collect();
    let want: BTreeSet<&str> = [TOP, "g", "d", "a", "e", "b", "c", "f"].into();
    check(ins == want, || format!("ground in-set {ins:?}"))?;
    let expect_d = [("g", 0), ("d", 0), ("a", 0), ("e", 1), ("b", 1), ("c", 2), ("f", 2)];
    for (n, d) in expect_d {
        check(g.d.get(n) == Some(&d), || format!("D({n}) = {:?}, expected {d}", g.d.get(n)))?;
    }
    let late = g.trace.iter().find(|s| s.overridden && s.assigned.iter().any(|(n, v)| n == "g" && *v == Zero));
    check(late.is_some_and(|s| s.d == 2), || format!("no overridden step against g at index 2: {:?}", g.trace))?;
    let beats = priority(DIndex { d1: g.d["g"], d2: 1 }, DIndex { d1: late.unwrap().d, d2: 1 });
    check(beats == Priority::Stronger, || format!("priority {beats:?}"))?;
    let dg = d_index(&net, "g").ok_or("D(g) undefined")?;
    check(dg.d1 == 0, || format!("D(g) = {dg:?}"))?;

    let ee1a = DefeasibleTheory::parse(
        "fact: wr\nfact: go\nstrict: b -> ~hw\nstrict: m -> hw\ndefeasible: wr => m\ndefeasible: go => b\n",
    )
    .unwrap();
    let net = compile_theory(&ee1a).unwrap();
    let g = ground_labelling(&net);
    for n in ["wr", "go", "m", "b"] {
        check(g.labelling.at(n) == One, || format!("{n} = {}", g.labelling.at(n)))?;
    }
    check(g.labelling.at("hw") == Half && g.labelling.at("~hw") == Half, || {
        format!("hw = {}, ~hw = {}", g.labelling.at("hw"), g.labelling.at("~hw"))
    })
}

fn criterion_10() -> Outcome {
    for n in 1..=4 {
        for frame in all_frames(n) {
            let base: BTreeSet<BTreeSet<String>> = enumerate_complete_labellings(&frame)
                .iter()
                .map(|l| {
                    let mut e = extension_of(l);
                    e.insert(TOP.to_string());
                    e
                })
                .collect();
            let star = negation_embedding(&frame);
            let keep: BTreeSet<&str> = frame.nodes().iter().map(String::as_str).chain([TOP]).collect();
            let exts = enumerate_complete_labellings(&star);
            let restricted: BTreeSet<BTreeSet<String>> = exts
                .iter()
                .map(|l| extension_of(l).into_iter().filter(|x| keep.contains(x.as_str())).collect())
                .collect();
            if restricted != base || exts.len() != base.len() {
                return Err(format!("differs on {:?}", frame.attacks().collect::<Vec<_>>()));
            }
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("two-cycle and chain", criterion_1),
        ("instantiated loop, three routes", criterion_2),
        ("equational systems", criterion_3),
        ("truth-node options", criterion_4),
        ("pipeline matches the model oracle", criterion_5),
        ("formation out-contract and conjunction cases", criterion_6),
        ("joint-attack reduction and set-attack realizations", criterion_7),
        ("monadic normal form and pattern attacks", criterion_8),
        ("defeasible ground propagation", criterion_9),
        ("negation embedding", criterion_10),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        match run() {
            Ok(()) => println!("PASS {} {name} ({:.1?})", i + 1, start.elapsed()),
            Err(why) => {
                println!("FAIL {} {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
