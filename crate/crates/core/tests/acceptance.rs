//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.

use std::collections::BTreeSet;
use std::process::ExitCode;

use npstrata::axioms::{builtin_axioms, Axiom};
use npstrata::condition::PrimeQuery;
use npstrata::engine::{
    closure, closure_with, Blocker, CheckOutcome, Context, Derivation, FactTable, RuleKind,
    Schedule,
};
use npstrata::oracle::{
    brute_codim, brute_enumerate, brute_partitions, triples_of, unordered, Triples,
};
use npstrata::polygon::{enumerate, parse, NewtonPolygon};
use npstrata::strata::{codim_ag, dim_ag, e_inequality};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn p(text: &str) -> NewtonPolygon {
    parse(text).expect("valid polygon")
}

fn nu(d: u32) -> NewtonPolygon {
    NewtonPolygon::nu(d).expect("d >= 3")
}

fn ss(n: u32) -> NewtonPolygon {
    NewtonPolygon::supersingular(n)
}

fn prime(q: u64) -> PrimeQuery {
    PrimeQuery::prime(q).expect("prime")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn expect_codim(xi: &NewtonPolygon, want: u32) -> Result<(), String> {
    let got = codim_ag(xi);
    ensure(got == want, || {
        format!("codim({xi}) = {got}, expected {want}")
    })
}

fn codimension_anchors() -> Outcome {
    let mut n = 0;
    expect_codim(&ss(4), 6)?;
    n += 1;
    for d in 3..=8 {
        expect_codim(&nu(d), d)?;
        expect_codim(&nu(d).direct_sum(&ss(1)), d + 2)?;
        n += 2;
    }
    for g in 4..=10 {
        expect_codim(&ss(3).with_ordinary(g - 3), 4)?;
        expect_codim(&nu(3).direct_sum(&ss(1)).with_ordinary(g - 4), 5)?;
        expect_codim(&ss(4).with_ordinary(g - 4), 6)?;
        n += 3;
    }
    Ok(format!("{n} exact values"))
}

fn supersingular_identity() -> Outcome {
    for g in 1..=12 {
        let lhs = dim_ag(g) - codim_ag(&ss(g));
        ensure(lhs == g * g / 4, || {
            format!("g={g}: {lhs} != {}", g * g / 4)
        })?;
    }
    Ok("g = 1..12".into())
}

fn oracle_equivalence() -> Outcome {
    let mut counts = Vec::new();
    let mut codims = 0;
    for g in 1..=8 {
        let main: BTreeSet<Triples> = enumerate(g).iter().map(triples_of).collect();
        let brute = brute_enumerate(g).map_err(|e| e.to_string())?;
        ensure(main == brute, || format!("enumerate differs at g={g}"))?;
        counts.push(brute.len());
        for xi in enumerate(g) {
            let (a, b) = (codim_ag(&xi), brute_codim(&xi));
            ensure(a == b, || format!("codim({xi}): {a} vs oracle {b}"))?;
            codims += 1;
        }
    }
    ensure(counts[..4] == [2, 3, 5, 8], || format!("counts {counts:?}"))?;
    let mut parts = 0;
    for g in 1..=7 {
        for xi in enumerate(g) {
            let main: BTreeSet<_> = xi
                .partitions()
                .iter()
                .map(|q| unordered(triples_of(&q.left), triples_of(&q.right)))
                .collect();
            let brute = brute_partitions(&xi).map_err(|e| e.to_string())?;
            ensure(main == brute, || format!("partitions({xi}) differ"))?;
            parts += 1;
        }
    }
    Ok(format!(
        "counts {counts:?}, {codims} codims, {parts} partition sets"
    ))
}

fn without(ids: &[&str]) -> Vec<Axiom> {
    builtin_axioms()
        .into_iter()
        .filter(|a| !ids.contains(&a.id.as_str()))
        .collect()
}

fn genus4_supersingular_rederived() -> Outcome {
    let axioms = without(&["A11"]);
    let table = closure(4, PrimeQuery::AllPrimes, &axioms);
    let fact = table.get(&ss(4)).map_err(|e| e.to_string())?;
    ensure(fact.state.occurs.is_all_primes(), || {
        "ss^4 not derived for all p".into()
    })?;
    ensure(fact.state.dim_lo_some == Some(3), || {
        format!("dim_lo_some {:?}", fact.state.dim_lo_some)
    })?;
    let Some(Derivation::Split { checks, e, .. }) = fact.provenance.split() else {
        return Err("no Split-style derivation".into());
    };
    ensure(*e == 3 && checks.len() == 2, || {
        format!("e={e}, {} partitions", checks.len())
    })?;
    for (a, b) in [(ss(1), ss(3)), (ss(2), ss(2))] {
        let c = checks
            .iter()
            .find(|c| c.is_pair(&a, &b))
            .ok_or("missing partition")?;
        ensure(
            c.sum() == Some(2) && c.outcome == CheckOutcome::Holds,
            || c.to_string(),
        )?;
    }
    let render = table.trace_render(&ss(4)).map_err(|e| e.to_string())?;
    ensure(render.matches("= 2 < 3").count() == 2, || render.clone())?;
    ensure(!table.cited_axioms().contains("A11"), || "A11 cited".into())?;
    Ok("dim_lo_some 3; (ss, ss^3) 0+2=2<3, (ss^2, ss^2) 1+1=2<3".into())
}

fn prank_results() -> Outcome {
    let table = closure(10, PrimeQuery::AllPrimes, &builtin_axioms());
    let mut n = 0;
    for f in table.facts() {
        let g = f.g();
        if g >= 4 && f.polygon.p_rank() + 4 >= g {
            ensure(f.state.occurs.is_all_primes(), || {
                format!("g={g} {} unknown", f.polygon)
            })?;
            n += 1;
        }
    }
    let g4 = table.facts_of_genus(4).filter(|f| f.occurs()).count();
    ensure(g4 == 8, || format!("{g4}/8 genus 4 polygons"))?;
    let g5: Vec<_> = table
        .facts_of_genus(5)
        .filter(|f| f.polygon.p_rank() > 0)
        .collect();
    ensure(g5.iter().all(|f| f.occurs()), || {
        "a genus 5 polygon with f > 0 is unknown".into()
    })?;
    Ok(format!(
        "{n} polygons with f >= g-4 (4 <= g <= 10); 8/8 at g=4; {}/{} at g=5, f>0",
        g5.len(),
        g5.len()
    ))
}

fn status(table: &FactTable, xi: &NewtonPolygon) -> Result<bool, String> {
    table.get(xi).map(|f| f.occurs()).map_err(|e| e.to_string())
}

fn conditional_corollary() -> Outcome {
    let axioms = builtin_axioms();
    let key5 = nu(5).direct_sum(&ss(1));
    let key6 = nu(6).direct_sum(&ss(1));
    for (q, want) in [(3, true), (5, true), (47, true), (2, false), (13, false)] {
        let t = closure(6, prime(q), &axioms);
        ensure(status(&t, &key5)? == want, || format!("nu5+ss at p={q}"))?;
    }
    ensure(
        !status(&closure(6, PrimeQuery::AllPrimes, &axioms), &key5)?,
        || "nu5+ss for all p".into(),
    )?;
    for (q, want) in [(2, true), (11, true), (13, false)] {
        let t = closure(7, prime(q), &axioms);
        ensure(status(&t, &key6)? == want, || format!("nu6+ss at p={q}"))?;
    }
    Ok("nu5+ss: yes at 3,5,47; unknown at 2,13,all p. nu6+ss: yes at 2,11; unknown at 13".into())
}

fn hypothesis_b(
    table: &FactTable,
    xi: &NewtonPolygon,
    pair: (&NewtonPolygon, &NewtonPolygon),
    nums: (u32, u32, u32),
) -> Result<(), String> {
    let f = table.get(xi).map_err(|e| e.to_string())?;
    ensure(!f.occurs(), || format!("{xi} should be unknown"))?;
    let Some(Blocker::InequalityFails { e, witness, .. }) = f.provenance.inequality_blocker()
    else {
        return Err(format!("{xi}: no hypothesis (b) blocker"));
    };
    ensure(witness.is_pair(pair.0, pair.1), || {
        format!("{xi}: witness {witness}")
    })?;
    let (lo, hi) = witness.td_sorted();
    ensure((lo, hi, *e) == (Some(nums.0), Some(nums.1), nums.2), || {
        format!("{xi}: numbers {witness}")
    })
}

fn hypothesis_a(table: &FactTable, xi: &NewtonPolygon) -> Result<(), String> {
    let f = table.get(xi).map_err(|e| e.to_string())?;
    ensure(!f.occurs(), || format!("{xi} should be unknown"))?;
    ensure(
        f.provenance.blockers.first() == Some(&Blocker::NoPartition),
        || format!("{xi}: blockers {:?}", f.provenance.blockers),
    )
}

fn genus5_survey() -> Outcome {
    let table = closure(5, PrimeQuery::AllPrimes, &builtin_axioms());
    let pair23 = p("G(2,3)+G(3,2)");
    hypothesis_a(&table, &nu(5))?;
    hypothesis_a(&table, &pair23)?;
    ensure(status(&table, &nu(4).direct_sum(&ss(1)))?, || {
        "nu4+ss unknown".into()
    })?;
    let nu3ss = nu(3).direct_sum(&ss(1));
    hypothesis_b(
        &table,
        &nu3ss.direct_sum(&ss(1)),
        (&nu3ss, &ss(1)),
        (0, 5, 5),
    )?;
    hypothesis_b(&table, &ss(5), (&ss(2), &ss(3)), (1, 2, 3))?;
    let prank0 = table
        .facts_of_genus(5)
        .filter(|f| f.polygon.p_rank() == 0)
        .count();
    ensure(prank0 == 5, || format!("{prank0} p-rank 0 polygons"))?;
    let at3 = closure(5, prime(3), &builtin_axioms());
    ensure(status(&at3, &nu(5))? && status(&at3, &pair23)?, || {
        "indecomposables not flipped at p=3".into()
    })?;
    Ok(
        "(a) nu5, G(2,3)+G(3,2); yes nu4+ss; (b) 5+0 !< 5 and 1+2 !< 3; p=3 flips both (a) cases"
            .into(),
    )
}

fn lemma_reformulations() -> Outcome {
    let (mut n1, mut n2, mut n3) = (0, 0, 0);
    for g in 2..=8 {
        for xi in enumerate(g) {
            let c0 = brute_codim(&xi);
            for part in xi.partitions() {
                for (a, b) in [(&part.left, &part.right), (&part.right, &part.left)] {
                    let (g1, g2) = (a.genus(), b.genus());
                    let (c1, c2) = (brute_codim(a), brute_codim(b));
                    let check = e_inequality(a, b);
                    if a.is_ordinary() && c2 + 3 <= 3 * g2 {
                        ensure(check, || format!("(1) fails for ({a}, {b})"))?;
                        n1 += 1;
                    }
                    if *a == ss(1) && c2 + 3 <= 3 * g2 {
                        ensure(check == (c0 < c2 + 3), || {
                            format!("(2) disagrees on ({a}, {b})")
                        })?;
                        n2 += 1;
                    }
                    if c1 + 3 <= 3 * g1 && c2 + 3 <= 3 * g2 {
                        ensure(check == (c0 < c1 + c2 + 3), || {
                            format!("(3) disagrees on ({a}, {b})")
                        })?;
                        n3 += 1;
                    }
                }
            }
        }
    }
    ensure(n1 > 0 && n2 > 0 && n3 > 0, || {
        "a case had no instances".into()
    })?;
    Ok(format!("instances: (1) {n1}, (2) {n2}, (3) {n3}"))
}

fn determinism() -> Outcome {
    let axioms = builtin_axioms();
    let mut reversed = RuleKind::ALL.to_vec();
    reversed.reverse();
    let mut rotated = RuleKind::ALL.to_vec();
    rotated.rotate_left(2);
    let mut outputs = Vec::new();
    for query in [PrimeQuery::AllPrimes, prime(3)] {
        let ctx = Context {
            query,
            axioms: &axioms,
        };
        let reference = closure_with(8, &ctx, &Schedule::default()).to_json();
        for schedule in [
            Schedule::Rounds {
                order: reversed.clone(),
                jobs: 4,
            },
            Schedule::Rounds {
                order: rotated.clone(),
                jobs: 2,
            },
            Schedule::Sequential {
                order: rotated.clone(),
                reverse_keys: false,
            },
            Schedule::Sequential {
                order: reversed.clone(),
                reverse_keys: true,
            },
        ] {
            let other = closure_with(8, &ctx, &schedule).to_json();
            ensure(other == reference, || {
                format!("{query}: {schedule:?} differs")
            })?;
        }
        outputs.push(reference.len());
    }
    Ok(format!(
        "5 schedules, jobs 1/2/4, byte-identical exports ({outputs:?} bytes)"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("codimension anchors", codimension_anchors),
        ("supersingular dimension identity", supersingular_identity),
        ("oracle equivalence", oracle_equivalence),
        (
            "genus 4 supersingular rederivation without A11",
            genus4_supersingular_rederived,
        ),
        (
            "p-rank >= g-4, genus 4 complete, genus 5 positive p-rank",
            prank_results,
        ),
        ("conditional occurrence of nu_d + ss", conditional_corollary),
        ("genus 5 p-rank 0 survey", genus5_survey),
        ("inequality reformulations", lemma_reformulations),
        ("schedule determinism (gmax 8)", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
