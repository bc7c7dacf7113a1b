//! Acceptance suite: theory-vs-simulation agreement, oracle equivalence on
//! the canonical fixture, and a scalability check. Each test prints one
//! PASS/FAIL line (run with `--nocapture` to see them all).

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use bootnet::clustering::{global_clustering, ClusteringMode};
use bootnet::components::{connected_components, ComponentKind};
use bootnet::crossnet::{
    closeness_by_copy_status, copied_fraction_of_reciprocated, copy_ratios,
    fof_native_follow_stats, interaction_sampling_stats, interaction_subgraph, partition,
    reciprocity_ratios, similarity_by_link_class, social_interaction_ratios, AccountMapping,
    FriendSetMode, Ratio, UserCategory,
};
use bootnet::generators::{generate, GeneratorSpec};
use bootnet::io::{load_graph, read_interactions, read_interests, read_mapping};
use bootnet::sampling::{
    derive_seed, measure, sample, sample_undirected, sweep, SampleParams,
};
use bootnet::stats::degree_stats;
use bootnet::theory::{
    gcc_threshold, predict_clustering_uncorrelated, predict_moments, thinned_degree_pmf,
};

fn pass(criterion: u32, detail: &str) {
    println!("[PASS] criterion {criterion}: {detail}");
}

fn check(criterion: u32, ok: bool, detail: &str) {
    assert!(ok, "[FAIL] criterion {criterion}: {detail}");
}

/// Criterion 1: ER giant-component threshold sweep. Weak-GCC fraction over
/// sampled nodes < 0.02 at p2 = 0.05 and > 0.10 at p2 = 0.13, with the
/// steepest inter-point increase straddling 1/11.
#[test]
fn criterion_01_er_threshold_sweep() {
    let started = Instant::now();
    let source = generate(&GeneratorSpec::erdos_renyi(100_000, 10.0, 101)).unwrap();
    let p2_grid = [0.05, 0.07, 0.09, 0.11, 0.13];
    let report = sweep(&source, &[1.0], &p2_grid, 20, 1).unwrap();
    let weak: Vec<f64> = report
        .cells
        .iter()
        .map(|c| c.gcc_weak_frac.unwrap().mean)
        .collect();
    let strong: Vec<f64> = report
        .cells
        .iter()
        .map(|c| c.gcc_strong_frac.unwrap().mean)
        .collect();
    let elapsed = started.elapsed().as_secs_f64();
    println!("criterion 1 weak-GCC curve over p2 {p2_grid:?}: {weak:?}");
    println!("criterion 1 strong-GCC curve (for reference):       {strong:?}");

    let increments: Vec<f64> = weak.windows(2).map(|w| w[1] - w[0]).collect();
    let steepest = increments
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let threshold = 1.0 / 11.0;
    let straddles = p2_grid[steepest] <= threshold && threshold <= p2_grid[steepest + 1];

    check(
        1,
        elapsed < 120.0,
        &format!("sweep took {elapsed:.1}s (limit 120s)"),
    );
    check(
        1,
        weak[0] < 0.02,
        &format!("weak-GCC fraction at p2=0.05 is {:.4}, expected < 0.02", weak[0]),
    );
    check(
        1,
        weak[4] > 0.10,
        &format!("weak-GCC fraction at p2=0.13 is {:.4}, expected > 0.10", weak[4]),
    );
    check(
        1,
        straddles,
        &format!(
            "steepest weak-GCC increase is over ({}, {}), which does not straddle 1/11 ~ {:.4}; increments {:?}",
            p2_grid[steepest],
            p2_grid[steepest + 1],
            threshold,
            increments
        ),
    );
    pass(
        1,
        &format!(
            "weak-GCC {:.4} -> {:.4} with steepest rise over ({}, {}), {elapsed:.1}s",
            weak[0],
            weak[4],
            p2_grid[steepest],
            p2_grid[steepest + 1]
        ),
    );
}

/// Criterion 2: scale-free sources percolate early. The measured-moment
/// threshold is at most half the ER threshold at matched mean degree, and
/// sampling at twice that threshold already yields a weak giant component.
#[test]
fn criterion_02_scale_free_earliness() {
    let source = generate(&GeneratorSpec::powerlaw_config(100_000, 2.5, 2, None, 42)).unwrap();
    let stats = degree_stats(&source).unwrap();
    let thr = gcc_threshold(stats.mean_k, stats.mean_k2).unwrap();
    let er_thr = 1.0 / (stats.mean_k + 1.0);
    check(
        2,
        thr.raw <= 0.5 * er_thr,
        &format!(
            "power-law threshold {:.5} vs half ER threshold {:.5}",
            thr.raw,
            0.5 * er_thr
        ),
    );
    let p_e = (2.0 * thr.raw).min(1.0);
    let copied = sample(&source, &SampleParams::new(1.0, p_e, 7).unwrap()).unwrap();
    let m = measure(&copied);
    check(
        2,
        m.gcc_weak_frac > 0.10,
        &format!(
            "weak-GCC fraction {:.4} at p_e = 2 x threshold = {:.5}",
            m.gcc_weak_frac, p_e
        ),
    );
    pass(
        2,
        &format!(
            "threshold {:.5} <= half ER {:.5}; weak-GCC {:.3} at p_e {:.5}",
            thr.raw,
            0.5 * er_thr,
            m.gcc_weak_frac,
            p_e
        ),
    );
}

/// Criterion 3: copied-network reciprocity equals the link sampling rate.
#[test]
fn criterion_03_reciprocity_equals_link_rate() {
    let source = generate(&GeneratorSpec::erdos_renyi(50_000, 10.0, 33)).unwrap();
    let mut details = Vec::new();
    for (i, &p2) in [0.2, 0.5, 0.8].iter().enumerate() {
        let params = SampleParams::new(0.5, p2, derive_seed(3, i as u64, 0)).unwrap();
        let copied = sample(&source, &params).unwrap();
        let r = measure(&copied).reciprocity.expect("copied edges exist");
        check(
            3,
            (r - p2).abs() < 0.02,
            &format!("reciprocity {r:.4} vs p2 {p2} (tolerance 0.02)"),
        );
        details.push(format!("p2={p2}: {r:.4}"));
    }
    pass(3, &details.join(", "));
}

fn tv_distance(a: &BTreeMap<u32, f64>, b: &BTreeMap<u32, f64>) -> f64 {
    let keys: BTreeSet<u32> = a.keys().chain(b.keys()).copied().collect();
    keys.iter()
        .map(|k| (a.get(k).unwrap_or(&0.0) - b.get(k).unwrap_or(&0.0)).abs())
        .sum::<f64>()
        / 2.0
}

/// Criterion 4: copied out-degree distribution matches binomial thinning of
/// the realized source distribution at p_e = 0.25, within TV 0.01.
#[test]
fn criterion_04_degree_thinning() {
    let source = generate(&GeneratorSpec::erdos_renyi(100_000, 10.0, 44)).unwrap();
    let source_stats = degree_stats(&source).unwrap();
    let copied = sample(&source, &SampleParams::new(0.5, 0.5, 4).unwrap()).unwrap();
    let copied_stats = degree_stats(&copied.graph).unwrap();
    let k_max = source_stats.out_pmf.keys().max().copied().unwrap_or(0);
    let predicted = thinned_degree_pmf(&source_stats.out_pmf, 0.25, k_max).unwrap();
    let tv = tv_distance(&copied_stats.out_pmf, &predicted.probs);
    check(4, tv < 0.01, &format!("total variation {tv:.5} (limit 0.01)"));
    pass(
        4,
        &format!(
            "TV(copied out-degree, thinned source pmf) = {tv:.5} over {} sampled nodes",
            copied.sampled_count()
        ),
    );
}

/// Criterion 5: measured copied-network moments within 3 standard errors
/// (over 20 replicas) of the predicted transforms.
#[test]
fn criterion_05_moment_transforms() {
    let source = generate(&GeneratorSpec::erdos_renyi(100_000, 10.0, 44)).unwrap();
    let stats = degree_stats(&source).unwrap();
    let (pred_k, pred_k2) = predict_moments(stats.mean_k, stats.mean_k2, 0.25).unwrap();
    let mut mk = Vec::new();
    let mut mk2 = Vec::new();
    for r in 0..20u64 {
        let params = SampleParams::new(0.5, 0.5, derive_seed(5, 0, r)).unwrap();
        let m = measure(&sample(&source, &params).unwrap());
        mk.push(m.mean_k.unwrap());
        mk2.push(m.mean_k2.unwrap());
    }
    let summarize = |v: &[f64]| {
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    };
    let (mean_k, se_k) = summarize(&mk);
    let (mean_k2, se_k2) = summarize(&mk2);
    check(
        5,
        (mean_k - pred_k).abs() <= 3.0 * se_k,
        &format!("mean_k {mean_k:.5} vs predicted {pred_k:.5} (3 SE = {:.5})", 3.0 * se_k),
    );
    check(
        5,
        (mean_k2 - pred_k2).abs() <= 3.0 * se_k2,
        &format!("mean_k2 {mean_k2:.5} vs predicted {pred_k2:.5} (3 SE = {:.5})", 3.0 * se_k2),
    );
    pass(
        5,
        &format!(
            "mean_k {mean_k:.4} ~ {pred_k:.4} (3SE {:.4}), mean_k2 {mean_k2:.4} ~ {pred_k2:.4} (3SE {:.4})",
            3.0 * se_k,
            3.0 * se_k2
        ),
    );
}

/// Criterion 6: clustering scales with the link sampling rate. The prediction
/// applies to the copied network in its undirected form (each link copied
/// once with probability p2), which the sampler provides directly; the
/// directed per-direction form projects to an effective retention of
/// 2 p2 - p2^2 per pair and is printed for reference.
#[test]
fn criterion_06_clustering_scaling() {
    let source = generate(&GeneratorSpec::ring_rewire(20_000, 10, 0.05, 11)).unwrap();
    let c_src = global_clustering(&source, ClusteringMode::MeanLocal).unwrap();
    let mut details = Vec::new();
    for (i, &p2) in [0.3, 0.6].iter().enumerate() {
        let predicted = p2 * c_src;
        let replicas = 3u64;
        let (mut und, mut dir) = (0.0, 0.0);
        for r in 0..replicas {
            let params = SampleParams::new(1.0, p2, derive_seed(6, i as u64, r)).unwrap();
            let cu = sample_undirected(&source, &params).unwrap();
            und += global_clustering(&cu.graph, ClusteringMode::MeanLocal).unwrap();
            let cd = sample(&source, &params).unwrap();
            dir += global_clustering(&cd.graph, ClusteringMode::MeanLocal).unwrap();
        }
        und /= replicas as f64;
        dir /= replicas as f64;
        println!(
            "criterion 6 p2={p2}: predicted {predicted:.4}, undirected copy {und:.4}, \
             directed projection {dir:.4} (expected inflation factor {:.2})",
            2.0 - p2
        );
        check(
            6,
            (und / predicted - 1.0).abs() <= 0.15,
            &format!(
                "mean_local {und:.4} vs p2 * C_s = {predicted:.4} (relative error {:.3}, limit 0.15)",
                und / predicted - 1.0
            ),
        );
        details.push(format!("p2={p2}: {und:.4} ~ {predicted:.4}"));
    }
    pass(6, &format!("C_s={c_src:.4}; {}", details.join(", ")));
}

/// Criterion 7: the uncorrelated clustering formula on an ER source.
#[test]
fn criterion_07_uncorrelated_clustering_formula() {
    let source = generate(&GeneratorSpec::erdos_renyi(10_000, 10.0, 77)).unwrap();
    let measured = global_clustering(&source, ClusteringMode::Transitivity).unwrap();
    // Poisson moments: (1/n)(lambda^2)^2 / lambda^3 = lambda / n
    let predicted = predict_clustering_uncorrelated(10_000, 10.0, 110.0)
        .unwrap()
        .raw;
    let ratio = measured / predicted;
    check(
        7,
        (0.7..=1.3).contains(&ratio),
        &format!("transitivity {measured:.6} vs lambda/n {predicted:.6} (ratio {ratio:.3})"),
    );
    pass(
        7,
        &format!("transitivity {measured:.6} within factor {ratio:.3} of lambda/n = {predicted:.6}"),
    );
}

// ---------------------------------------------------------------------------
// criterion 8: canonical fixture vs hand-enumerated oracle, exact rationals
// ---------------------------------------------------------------------------

fn fixture_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures/canonical")
        .join(name)
}

fn parse_fraction(s: &str) -> Option<Ratio> {
    if s == "undef" {
        return None;
    }
    let (num, den) = s.split_once('/').expect("fraction as num/den");
    Ratio::new(num.parse().unwrap(), den.parse().unwrap())
}

fn assert_exact(criterion: u32, what: &str, got: Option<Ratio>, want: Option<Ratio>) {
    let ok = match (got, want) {
        (None, None) => true,
        (Some(a), Some(b)) => a.eq_exact(&b),
        _ => false,
    };
    check(
        criterion,
        ok,
        &format!("{what}: got {got:?}, oracle {want:?}"),
    );
}

/// Clustering coefficients are ratios of small integers evaluated in f64; the
/// oracle comparison reproduces the same division exactly.
fn assert_clustering_exact(criterion: u32, what: &str, got: Option<f64>, want: Option<Ratio>) {
    let ok = match (got, want) {
        (None, None) => true,
        (Some(g), Some(w)) => g == w.num as f64 / w.den as f64,
        _ => false,
    };
    check(
        criterion,
        ok,
        &format!("{what}: got {got:?}, oracle {want:?}"),
    );
}

#[test]
fn criterion_08_crossnet_oracle_equivalence() {
    let (target, tix, _) = load_graph(&fixture_path("target.tsv"), true).unwrap();
    let (source, six, _) = load_graph(&fixture_path("source.tsv"), false).unwrap();
    let mapping = AccountMapping::new(
        read_mapping(&fixture_path("mapping.tsv"), &tix, &six).unwrap(),
    )
    .unwrap();
    let part = partition(&target, &source, &mapping).unwrap();
    let log = read_interactions(&fixture_path("interactions.tsv"), &tix).unwrap();
    let interests = read_interests(&fixture_path("interests.tsv"), &tix).unwrap();
    let (inter_graph, non_social) = interaction_subgraph(&target, &log);
    let inter_stats = interaction_sampling_stats(&target, &part, &inter_graph).unwrap();
    let social = social_interaction_ratios(&target, &part, &log);
    let fof = fof_native_follow_stats(&part, &target);

    assert_eq!(part.connected_count(), 6);
    assert_eq!(part.copied_count(), 7);
    assert_eq!(part.native_count(), 10);
    assert_eq!(part.copiable_count(), 7);
    assert_eq!(
        part.copied_count() + part.native_count(),
        target.edge_count()
    );
    assert_eq!(non_social, 2);
    assert_eq!(inter_graph.edge_count(), 9);

    let oracle = std::fs::read_to_string(fixture_path("oracle_user_metrics.csv")).unwrap();
    let mut seen_users = 0;
    for line in oracle.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f.len(), 22, "oracle row width");
        let label = f[0];
        let u = tix.get(label).unwrap_or_else(|| panic!("unknown user {label}"));
        seen_users += 1;

        let (cr, cr_ind, cr_out) = copy_ratios(&part, &target, &source, u).unwrap();
        let (r_copied, r_native) =
            reciprocity_ratios(&part, &target, &source, u, FriendSetMode::Copiable).unwrap();
        let cfr = copied_fraction_of_reciprocated(&part, &target, &source, u).unwrap();
        let category = UserCategory::from_copy_ratio(cr);
        let istats = &inter_stats[u as usize];
        let soc = &social[u as usize];

        check(
            8,
            category.as_str() == f[1],
            &format!("{label} category: got {}, oracle {}", category.as_str(), f[1]),
        );
        assert_exact(8, &format!("{label} cr"), cr, parse_fraction(f[2]));
        assert_exact(8, &format!("{label} cr_ind"), cr_ind, parse_fraction(f[3]));
        assert_exact(8, &format!("{label} cr_out"), cr_out, parse_fraction(f[4]));
        assert_exact(8, &format!("{label} r_copied"), r_copied, parse_fraction(f[5]));
        assert_exact(8, &format!("{label} r_native"), r_native, parse_fraction(f[6]));
        assert_exact(8, &format!("{label} copied_frac_recip"), cfr, parse_fraction(f[7]));
        assert_exact(
            8,
            &format!("{label} frac_reciprocated"),
            istats.frac_reciprocated,
            parse_fraction(f[8]),
        );
        assert_exact(
            8,
            &format!("{label} frac_unreciprocated"),
            istats.frac_unreciprocated,
            parse_fraction(f[9]),
        );
        assert_exact(
            8,
            &format!("{label} frac_copied"),
            istats.frac_copied,
            parse_fraction(f[10]),
        );
        assert_exact(
            8,
            &format!("{label} frac_native"),
            istats.frac_native,
            parse_fraction(f[11]),
        );
        assert_clustering_exact(
            8,
            &format!("{label} clustering_target"),
            istats.clustering_target,
            parse_fraction(f[12]),
        );
        assert_clustering_exact(
            8,
            &format!("{label} clustering_interaction"),
            istats.clustering_interaction,
            parse_fraction(f[13]),
        );
        assert_exact(
            8,
            &format!("{label} social_activity"),
            soc.social_activity,
            parse_fraction(f[14]),
        );
        assert_exact(
            8,
            &format!("{label} social_influence"),
            soc.social_influence,
            parse_fraction(f[15]),
        );
        assert_exact(
            8,
            &format!("{label} fb_activity"),
            soc.fb_activity,
            parse_fraction(f[16]),
        );
        assert_exact(
            8,
            &format!("{label} fb_influence"),
            soc.fb_influence,
            parse_fraction(f[17]),
        );
        let act: u64 = soc.activity_counts.values().sum();
        let inf: u64 = soc.influence_counts.values().sum();
        check(8, act == f[18].parse::<u64>().unwrap(), &format!("{label} activity {act} vs {}", f[18]));
        check(8, inf == f[19].parse::<u64>().unwrap(), &format!("{label} influence {inf} vs {}", f[19]));
        let (x, y) = fof[u as usize];
        check(8, x == f[20].parse::<u64>().unwrap(), &format!("{label} copied_friends {x} vs {}", f[20]));
        check(8, y == f[21].parse::<u64>().unwrap(), &format!("{label} native_fof {y} vs {}", f[21]));

        // the friend-set flag must not change any neighborhood-intersected metric
        let (rc2, rn2) =
            reciprocity_ratios(&part, &target, &source, u, FriendSetMode::CopiedOnly).unwrap();
        assert_exact(8, &format!("{label} r_copied (copied-only fr)"), rc2, parse_fraction(f[5]));
        assert_exact(8, &format!("{label} r_native (copied-only fr)"), rn2, parse_fraction(f[6]));
    }
    assert_eq!(seen_users, 10, "oracle covers all users");

    // pair-level metrics: similarity and closeness by link class
    let sim = similarity_by_link_class(&part, &target, &interests);
    let clo = closeness_by_copy_status(&part, &target, &source);
    let mut got: HashMap<(String, String, String, String), Ratio> = HashMap::new();
    for (metric, samples) in [("similarity", &sim), ("closeness", &clo)] {
        for (class, list) in [
            ("copied", &samples.copied),
            ("uncopied_copiable", &samples.uncopied_copiable),
            ("native", &samples.native),
        ] {
            for s in list {
                let (a, b) = (tix.label(s.u).to_string(), tix.label(s.v).to_string());
                let (a, b) = if a <= b { (a, b) } else { (b, a) };
                got.insert((metric.into(), class.into(), a, b), s.value);
            }
        }
    }
    let pair_oracle = std::fs::read_to_string(fixture_path("oracle_pair_metrics.csv")).unwrap();
    let mut expected_rows = 0;
    for line in pair_oracle.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let key = (
            f[0].to_string(),
            f[1].to_string(),
            f[2].to_string(),
            f[3].to_string(),
        );
        let want = parse_fraction(f[4]).expect("pair oracle has defined values");
        let got_value = got
            .get(&key)
            .unwrap_or_else(|| panic!("missing pair sample {key:?}"));
        check(
            8,
            got_value.eq_exact(&want),
            &format!("{key:?}: got {got_value:?}, oracle {want:?}"),
        );
        expected_rows += 1;
    }
    check(
        8,
        got.len() == expected_rows,
        &format!("pair sample count {} vs oracle rows {expected_rows}", got.len()),
    );

    // independent brute-force enumeration cross-validates the oracle itself
    brute_force_cross_check();

    pass(8, "all per-user and per-pair fixture metrics match the oracle exactly");
}

/// Minimal set-based re-derivation of the fixture metrics straight from the
/// TSV files, independent of the crossnet implementation and of the oracle.
fn brute_force_cross_check() {
    let read = |name: &str| std::fs::read_to_string(fixture_path(name)).unwrap();
    let rows = |body: String| -> Vec<Vec<String>> {
        body.lines()
            .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
            .map(|l| l.split('\t').map(str::to_string).collect())
            .collect()
    };
    let target_rows = rows(read("target.tsv"));
    let source_rows = rows(read("source.tsv"));
    let map_rows = rows(read("mapping.tsv"));

    let mut out: HashMap<String, HashSet<String>> = HashMap::new();
    let mut ind: HashMap<String, HashSet<String>> = HashMap::new();
    let mut users: BTreeSet<String> = BTreeSet::new();
    for r in &target_rows {
        users.insert(r[0].clone());
        users.insert(r[1].clone());
        if r[0] != r[1] {
            out.entry(r[0].clone()).or_default().insert(r[1].clone());
            ind.entry(r[1].clone()).or_default().insert(r[0].clone());
        }
    }
    let mut src_adj: HashMap<String, HashSet<String>> = HashMap::new();
    for r in &source_rows {
        src_adj.entry(r[0].clone()).or_default().insert(r[1].clone());
        src_adj.entry(r[1].clone()).or_default().insert(r[0].clone());
    }
    let t2s: HashMap<String, String> = map_rows.iter().map(|r| (r[0].clone(), r[1].clone())).collect();
    let s2t: HashMap<String, String> = map_rows.iter().map(|r| (r[1].clone(), r[0].clone())).collect();

    // fr = source friends with connected accounts, in target labels
    let fr = |u: &str| -> HashSet<String> {
        t2s.get(u)
            .and_then(|su| src_adj.get(su))
            .map(|nbrs| nbrs.iter().filter_map(|sv| s2t.get(sv).cloned()).collect())
            .unwrap_or_default()
    };

    let oracle = read("oracle_user_metrics.csv");
    for line in oracle.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let u = f[0];
        let empty = HashSet::new();
        let o = out.get(u).unwrap_or(&empty);
        let i = ind.get(u).unwrap_or(&empty);
        let all: HashSet<_> = o.union(i).cloned().collect();
        let frs = fr(u);

        let ratio = |num: usize, den: usize| -> Option<Ratio> { Ratio::new(num as u64, den as u64) };
        let cr = ratio(all.intersection(&frs).count(), all.len());
        assert_exact(8, &format!("oracle self-check {u} cr"), cr, parse_fraction(f[2]));
        let cr_ind = ratio(i.intersection(&frs).count(), i.len());
        assert_exact(8, &format!("oracle self-check {u} cr_ind"), cr_ind, parse_fraction(f[3]));
        let cr_out = ratio(o.intersection(&frs).count(), o.len());
        assert_exact(8, &format!("oracle self-check {u} cr_out"), cr_out, parse_fraction(f[4]));

        let fr_i: HashSet<_> = i.intersection(&frs).cloned().collect();
        let fr_o: HashSet<_> = o.intersection(&frs).cloned().collect();
        let r_copied = ratio(
            fr_i.intersection(&fr_o).count(),
            fr_i.union(&fr_o).count(),
        );
        assert_exact(8, &format!("oracle self-check {u} r_copied"), r_copied, parse_fraction(f[5]));
        let i_n: HashSet<_> = i.difference(&frs).cloned().collect();
        let o_n: HashSet<_> = o.difference(&frs).cloned().collect();
        let r_native = ratio(i_n.intersection(&o_n).count(), i_n.union(&o_n).count());
        assert_exact(8, &format!("oracle self-check {u} r_native"), r_native, parse_fraction(f[6]));

        let recip: HashSet<_> = i.intersection(o).cloned().collect();
        let cfr = ratio(recip.intersection(&frs).count(), recip.len());
        assert_exact(8, &format!("oracle self-check {u} cfr"), cfr, parse_fraction(f[7]));

        // fof: copied out-neighbors and native in-neighbors adjacent to them
        let is_src_edge = |a: &str, b: &str| {
            match (t2s.get(a), t2s.get(b)) {
                (Some(sa), Some(sb)) => src_adj.get(sa).is_some_and(|n| n.contains(sb)),
                _ => false,
            }
        };
        let copied_out: HashSet<_> = o.iter().filter(|v| is_src_edge(u, v)).cloned().collect();
        let proj_adjacent = |a: &str, b: &str| {
            out.get(a).is_some_and(|n| n.contains(b)) || out.get(b).is_some_and(|n| n.contains(a))
        };
        let y = if copied_out.is_empty() {
            0
        } else {
            i.iter()
                .filter(|v| !is_src_edge(u, v))
                .filter(|v| copied_out.iter().any(|c| proj_adjacent(v, c)))
                .count()
        };
        check(
            8,
            copied_out.len() == f[20].parse::<usize>().unwrap(),
            &format!("oracle self-check {u} copied_friends"),
        );
        check(
            8,
            y == f[21].parse::<usize>().unwrap(),
            &format!("oracle self-check {u} native_fof: brute force {y} vs oracle {}", f[21]),
        );
    }
}

/// Criterion 9: binomial thinning composes as a semigroup on 1000 random
/// pmfs, within 1e-9 per entry.
#[test]
fn criterion_09_thinning_semigroup() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
    let mut max_err: f64 = 0.0;
    for _ in 0..1000 {
        let support = rng.gen_range(1..=12usize);
        let mut pmf: BTreeMap<u32, f64> = BTreeMap::new();
        let mut total = 0.0;
        for _ in 0..support {
            let k = rng.gen_range(0..=15u32);
            let w = rng.gen::<f64>() + 1e-3;
            *pmf.entry(k).or_insert(0.0) += w;
            total += w;
        }
        for w in pmf.values_mut() {
            *w /= total;
        }
        let k_max = pmf.keys().max().copied().unwrap();
        let a = rng.gen::<f64>();
        let b = rng.gen::<f64>();
        let two_step =
            thinned_degree_pmf(&thinned_degree_pmf(&pmf, a, k_max).unwrap().probs, b, k_max)
                .unwrap();
        let one_step = thinned_degree_pmf(&pmf, a * b, k_max).unwrap();
        for k in 0..=k_max {
            let x = two_step.probs.get(&k).unwrap_or(&0.0);
            let y = one_step.probs.get(&k).unwrap_or(&0.0);
            let err = (x - y).abs();
            max_err = max_err.max(err);
            check(
                9,
                err < 1e-9,
                &format!("entry k={k}: |{x} - {y}| = {err}"),
            );
        }
    }
    pass(9, &format!("1000 random pmfs, max per-entry error {max_err:.2e}"));
}

/// Criterion 10: ingest a 10M-edge TSV, build the graph, and compute degree
/// stats plus weak components within 60 seconds and under 4 GB of memory.
#[test]
fn criterion_10_scalability() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.tsv");
    {
        // deterministic LCG edge stream over 2M nodes
        let mut file = std::io::BufWriter::new(std::fs::File::create(&path).unwrap());
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            state >> 11
        };
        const NODES: u64 = 2_000_000;
        for _ in 0..10_000_000u64 {
            let u = next() % NODES;
            let v = next() % NODES;
            writeln!(file, "u{u}\tu{v}").unwrap();
        }
        file.flush().unwrap();
    }

    let started = Instant::now();
    let (graph, _, _) = load_graph(&path, true).unwrap();
    let stats = degree_stats(&graph).unwrap();
    let comps = connected_components(&graph, ComponentKind::Weak).unwrap();
    let elapsed = started.elapsed().as_secs_f64();

    // a handful of the 2M ids never appear in the random edge stream
    assert!(graph.node_count() > 1_999_000 && graph.node_count() <= 2_000_000);
    assert!(graph.edge_count() > 9_900_000, "self loops and duplicates only");
    assert!(stats.mean_k > 4.9 && stats.mean_k < 5.1);
    assert!(comps.gcc_fraction_of_nodes > 0.9, "dense ER-like graph is connected");

    check(
        10,
        elapsed < 60.0,
        &format!("ingest + stats + weak components took {elapsed:.1}s (limit 60s)"),
    );
    let peak_gb = peak_rss_gb();
    if let Some(gb) = peak_gb {
        check(10, gb < 4.0, &format!("peak RSS {gb:.2} GB (limit 4 GB)"));
    }
    pass(
        10,
        &format!(
            "10M edges in {elapsed:.1}s, gcc fraction {:.3}, peak RSS {}",
            comps.gcc_fraction_of_nodes,
            peak_gb
                .map(|g| format!("{g:.2} GB"))
                .unwrap_or_else(|| "unavailable".into())
        ),
    );
}

/// VmHWM from /proc/self/status, if available.
fn peak_rss_gb() -> Option<f64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: f64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb / 1024.0 / 1024.0)
}
