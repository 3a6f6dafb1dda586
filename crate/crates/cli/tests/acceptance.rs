//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symjoin::complex::{subsets_of_size, VertexSet};
use symjoin::homology::{reduced_homology, verify_connectivity_homology};
use symjoin::morse::{
    build_matching, connectivity_lower_bound, critical_report, verify_acyclicity,
    verify_matching, Connectivity, GradientField,
};
use symjoin::sampling::{all_balanced_families, random_balanced, random_balanced_families};
use symjoin::unavoidability::{
    classify_deficiency, clique_to_partition, has_d_clique, build_kneser_graph,
    is_collectively_unavoidable, is_collectively_unavoidable_bruteforce, skeleta_family,
    vkf_parameters, Witness,
};
use symjoin::{Complex, Family, JoinCell, JoinComplex};

const SEED: u64 = 0x5eed_2024;
const R2_CAP: u64 = 500;
const R3_SAMPLES: usize = 200;
const HOMOLOGY_CELL_CAP: usize = 20_000;

struct Outcome {
    passed: bool,
    detail: String,
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_symjoin"))
        .args(args)
        .output()
        .expect("the symjoin binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

/// Unpruned search over all tuples of pairwise disjoint sets, covering or not.
fn naive_unavoidable(fam: &Family) -> bool {
    let m = fam.ground();
    let r = fam.r();
    // each element goes to one of the r blocks or to none of them
    let total = (r as u64 + 1).pow(m as u32);
    (0..total).all(|mut code| {
        let mut blocks = vec![VertexSet::EMPTY; r];
        for v in 1..=m {
            let slot = (code % (r as u64 + 1)) as usize;
            code /= r as u64 + 1;
            if slot < r {
                blocks[slot] = blocks[slot].with(v);
            }
        }
        blocks
            .iter()
            .zip(fam.complexes())
            .any(|(a, k)| k.contains(*a))
    })
}

/// A sound violating partition: blocks cover `[m]` disjointly and `A_i ∉ K_i`.
fn witness_is_sound(fam: &Family, blocks: &[VertexSet]) -> bool {
    let mut seen = VertexSet::EMPTY;
    for b in blocks {
        if !b.is_disjoint(seen) {
            return false;
        }
        seen = seen.union(*b);
    }
    blocks.len() == fam.r()
        && seen == VertexSet::full(fam.ground())
        && blocks.iter().zip(fam.complexes()).all(|(a, k)| !k.contains(*a))
}

struct Instance {
    family: Family,
    k: usize,
}

/// Balanced families for criteria 1 to 3: exhaustive or 500 samples per
/// `(m, k)` for `r = 2`, and 200 samples per `m` for `r = 3`.
fn instances() -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = Vec::new();
    for m in 2..=6 {
        for k in 0..m {
            let fams = match all_balanced_families(m, k, 2, R2_CAP) {
                Some(all) => all,
                None => random_balanced_families(m, k, 2, R2_CAP as usize, None, &mut rng)
                    .expect("valid parameters"),
            };
            out.extend(fams.into_iter().map(|family| Instance { family, k }));
        }
    }
    for m in 5..=8 {
        for _ in 0..R3_SAMPLES {
            let k = rng.gen_range(0..m - 1);
            let family = random_balanced_families(m, k, 3, 1, None, &mut rng)
                .expect("valid parameters")
                .pop()
                .expect("one family");
            out.push(Instance { family, k });
        }
    }
    out
}

fn criterion_1_and_2(instances: &[Instance]) -> (Outcome, Outcome) {
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut homology_checked = 0;
    let mut homology_failures = Vec::new();
    for inst in instances {
        let fam = &inst.family;
        if !is_collectively_unavoidable_bruteforce(fam).verdict {
            continue;
        }
        checked += 1;
        let (m, r) = (fam.ground() as i64, fam.r() as i64);
        let target = m - r - 1;
        let j = JoinComplex::symmetrized(fam);
        let g = build_matching(&j).expect("matching builds");
        let report = critical_report(&j, &g);
        let bound = connectivity_lower_bound(&report);
        let ok = verify_matching(&j, &g)
            && verify_acyclicity(&j, &g)
            && report.violations.is_empty()
            && bound.as_ref().is_ok_and(|b| b.covers(target));
        if !ok {
            failures.push(format!("m={m} r={r} k={} bound={bound:?}", inst.k));
        }
        if j.len() <= HOMOLOGY_CELL_CAP {
            homology_checked += 1;
            if !verify_connectivity_homology(&j, target).expect("chain complex") {
                homology_failures.push(format!("m={m} r={r} k={}", inst.k));
            }
        }
    }
    let c1 = Outcome {
        passed: failures.is_empty() && checked > 0,
        detail: format!(
            "{checked} unavoidable balanced families, {} failures {:?}",
            failures.len(),
            failures.iter().take(3).collect::<Vec<_>>()
        ),
    };
    let c2 = Outcome {
        passed: homology_failures.is_empty() && homology_checked > 0,
        detail: format!(
            "{homology_checked} joins with at most {HOMOLOGY_CELL_CAP} cells, {} failures",
            homology_failures.len()
        ),
    };
    (c1, c2)
}

fn criterion_3(instances: &[Instance]) -> Outcome {
    let mut disagreements = 0;
    let mut naive_checked = 0;
    let mut cases = BTreeSet::new();
    for inst in instances {
        let fam = &inst.family;
        let fast = is_collectively_unavoidable(fam, inst.k);
        let brute = is_collectively_unavoidable_bruteforce(fam);
        cases.insert(format!("{:?}", classify_deficiency(fam, inst.k).case));
        let mut agree = fast.verdict == brute.verdict;
        if fam.ground() <= 6 {
            naive_checked += 1;
            agree &= naive_unavoidable(fam) == brute.verdict;
        }
        for cert in [&fast, &brute] {
            if let Some(Witness::Partition(p)) = &cert.witness {
                agree &= witness_is_sound(fam, p);
            }
        }
        if !agree {
            disagreements += 1;
        }
    }
    Outcome {
        passed: disagreements == 0 && cases.len() == 4,
        detail: format!(
            "{} families ({naive_checked} also against the unpruned oracle), {disagreements} \
             disagreements, cases seen {cases:?}",
            instances.len()
        ),
    }
}

fn criterion_4() -> Outcome {
    let (code, out) = cli(&["repro", "example-3-2"]);
    let expected = [
        "PASS K is (9,2)-balanced and collectively unavoidable",
        "PASS L is (9,2)-balanced and collectively unavoidable",
        "PASS (789,34,12;56) lies in SymmDelJoin(L) but not in SymmDelJoin(K)",
        "PASS SymmDelJoin(K) certificate is exactly 5-connected",
    ];
    let missing: Vec<_> = expected.iter().filter(|l| !out.contains(*l)).collect();
    Outcome {
        passed: code == 0 && missing.is_empty() && out.contains("RESULT PASS"),
        detail: format!("repro example-3-2 exit {code}, missing lines {missing:?}"),
    }
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let mut spheres = 0;
    let mut certificates = 0;
    let mut failures = Vec::new();
    for m in 4..=6usize {
        for _ in 0..50 {
            let k = rng.gen_range(0..=m - 2);
            let kc = random_balanced(m, k, None, &mut rng).expect("valid parameters");
            let fam = Family::new(vec![kc.clone(), kc.alexander_dual()]).expect("same ground");
            let h = reduced_homology(&JoinComplex::deleted(&fam), None).expect("chain complex");
            let sphere = h.minus_one == 0
                && h.torsion.iter().all(Vec::is_empty)
                && (0..h.betti.len()).all(|p| h.betti[p] == usize::from(p == m - 2))
                && h.betti.len() == m - 1;
            spheres += 1;
            if !sphere {
                failures.push(format!("m={m} K={:?} profile={h:?}", kc.facets()));
            }
            if m == 2 * k + 2 {
                certificates += 1;
                let j = JoinComplex::symmetrized(&fam);
                let g = build_matching(&j).expect("matching builds");
                let ok = verify_matching(&j, &g)
                    && verify_acyclicity(&j, &g)
                    && connectivity_lower_bound(&critical_report(&j, &g)).ok()
                        == Some(Connectivity::AtLeast(m as i64 - 3));
                if !ok {
                    failures.push(format!("certificate m={m} K={:?}", kc.facets()));
                }
            }
        }
    }
    let (code, _) = cli(&["repro", "bier-3-1"]);
    Outcome {
        passed: failures.is_empty() && certificates > 0 && code == 0,
        detail: format!(
            "{spheres} spheres, {certificates} certificates at m = 2k+2, repro bier-3-1 exit \
             {code}, failures {:?}",
            failures.iter().take(3).collect::<Vec<_>>()
        ),
    }
}

fn criterion_6() -> Outcome {
    let rp2 = Complex::rp2_minimal();
    let counts = rp2.cardinality_counts();
    let h = reduced_homology(&rp2, None).expect("chain complex");
    let complementary = subsets_of_size(6, 3)
        .all(|t| rp2.contains(t) != rp2.contains(t.complement(6)));
    let triples = subsets_of_size(6, 3).count();
    let (code, out) = cli(&["homology", "--fixture", "rp2", "--max-dim", "2"]);
    let cli_ok = code == 0 && out.replace(char::is_whitespace, "").contains("\"torsion\":[[],[\"2\"],[]]");
    let passed = counts == vec![1, 6, 15, 10]
        && rp2.facets().len() == 10
        && rp2.euler_characteristic() == 1
        && h.betti == vec![0, 0, 0]
        && h.torsion(1).iter().map(|t| t.to_string()).collect::<Vec<_>>() == ["2"]
        && h.torsion(0).is_empty()
        && h.torsion(2).is_empty()
        && complementary
        && triples == 20
        && rp2.alexander_dual() == rp2
        && cli_ok;
    Outcome {
        passed,
        detail: format!(
            "face counts {counts:?}, euler {}, H~_1 torsion {:?}, {triples} triples \
             complementary = {complementary}, cli exit {code}",
            rp2.euler_characteristic(),
            h.torsion(1)
        ),
    }
}

fn compositions(total: usize, r: usize) -> Vec<Vec<usize>> {
    if r == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, r - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn criterion_7() -> Outcome {
    let mut families = 0;
    let mut bad = Vec::new();
    for r in 1..=3usize {
        for m in 1..=9usize {
            if m + 1 < r {
                continue;
            }
            for sizes in compositions(m + 1 - r, r) {
                let s = skeleta_family(m, &sizes).expect("valid sizes");
                families += 1;
                let verdict = is_collectively_unavoidable_bruteforce(&s.family).verdict;
                if !(s.condition_holds && verdict && naive_unavoidable_small(&s.family)) {
                    bad.push((m, sizes));
                }
            }
        }
    }
    let mut tuples = 0;
    let mut equivalence = true;
    for r in 2..=5u64 {
        for d in 1..=6i64 {
            for k in 0..=12i64 {
                for s in 0..r as i64 {
                    let p = vkf_parameters(r, d, k, s);
                    let ri = r as i64;
                    let m = s * (k + 2) + (ri - s) * (k + 1) + ri - 1;
                    let lhs = ri * k + s == (ri - 1) * d;
                    let rhs = m - 1 == (ri - 1) * (d + 2);
                    equivalence &= lhs == rhs && p.tight_dimension == lhs && p.tight_size == rhs;
                    tuples += 1;
                }
            }
        }
    }
    let (code, _) = cli(&["repro", "skeleta-3-4"]);
    Outcome {
        passed: bad.is_empty() && equivalence && code == 0,
        detail: format!(
            "{families} skeleta compositions, failures {bad:?}; {tuples} parameter tuples, \
             equivalence {equivalence}; repro skeleta-3-4 exit {code}"
        ),
    }
}

/// The unpruned oracle is only affordable up to `(r + 1)^m` around 10^5.
fn naive_unavoidable_small(fam: &Family) -> bool {
    if (fam.r() as f64 + 1.0).powi(fam.ground() as i32) > 2e5 {
        return true;
    }
    naive_unavoidable(fam)
}

fn criterion_8() -> Outcome {
    // two 3-sets on six points escape both 2-skeleta
    let fam = skeleta_family(6, &[2, 2]).expect("valid").family;
    let brute = is_collectively_unavoidable_bruteforce(&fam);
    let brute_sound = match &brute.witness {
        Some(Witness::Partition(p)) => witness_is_sound(&fam, p),
        _ => false,
    };
    let fast = is_collectively_unavoidable(&fam, 1);
    let fast_sound = match &fast.witness {
        Some(Witness::Partition(p)) => witness_is_sound(&fam, p),
        Some(Witness::Clique(c)) => witness_is_sound(&fam, &clique_to_partition(&fam, 1, c)),
        None => false,
    };
    // a clique witness from the Kneser graph of a family missing {1,2} and {3,4}
    let k1 = Complex::skeleton(4, 2)
        .unwrap()
        .without_face(VertexSet::new(4, &[1, 2]).unwrap());
    let k2 = Complex::skeleton(4, 2)
        .unwrap()
        .without_face(VertexSet::new(4, &[3, 4]).unwrap());
    let clique_fam = Family::new(vec![k1, k2]).unwrap();
    let clique = has_d_clique(&build_kneser_graph(&clique_fam, 1).unwrap(), 2);
    let clique_sound = clique.as_ref().is_some_and(|c| {
        witness_is_sound(&clique_fam, &clique_to_partition(&clique_fam, 1, c))
    });

    // each vertex of the triangle boundary matched to the next edge: a 3-cycle
    let triangle = Complex::skeleton(3, 2).unwrap();
    let j = JoinComplex::from_complex(&triangle);
    let cell = |v: &[usize]| JoinCell::from_lists(3, &[v.to_vec()]).unwrap();
    let cyclic = GradientField::from_pairs(
        &j,
        vec![
            (cell(&[1]), cell(&[1, 2])),
            (cell(&[2]), cell(&[2, 3])),
            (cell(&[3]), cell(&[1, 3])),
        ],
    );
    let rejected = verify_matching(&j, &cyclic) && !verify_acyclicity(&j, &cyclic);
    Outcome {
        passed: !brute.verdict && brute_sound && !fast.verdict && fast_sound && clique_sound
            && rejected,
        detail: format!(
            "skeleta (2,2) on 6 points avoidable with sound witnesses ({}, {}), clique witness \
             sound {clique_sound}, cyclic field rejected {rejected}",
            brute.method, fast.method
        ),
    }
}

fn main() {
    // `cargo test -- <filter>` style arguments are accepted and ignored
    let started = Instant::now();
    let instances = instances();
    let (c1, c2) = criterion_1_and_2(&instances);
    let results = vec![
        ("1", "pivot matching certifies every unavoidable balanced family", c1),
        ("2", "homology vanishes through degree m-r-1", c2),
        ("3", "deficiency and clique test agree with brute force", criterion_3(&instances)),
        ("4", "nine-point triples, separating cell and 5-connected certificate", criterion_4()),
        ("5", "Bier spheres and their symmetrized joins", criterion_5()),
        ("6", "six-vertex projective plane", criterion_6()),
        ("7", "skeleta condition and parameter arithmetic", criterion_7()),
        ("8", "negative controls", criterion_8()),
    ];
    let mut all = true;
    for (n, name, o) in &results {
        all &= o.passed;
        println!(
            "criterion {n}: {} {name} ({})",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "acceptance: {} in {:.1}s",
        if all { "PASS" } else { "FAIL" },
        started.elapsed().as_secs_f64()
    );
    if !all {
        std::process::exit(1);
    }
}
