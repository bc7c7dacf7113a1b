//! Interest similarity, friend-list closeness, and binned trend series.

use std::collections::{BTreeSet, HashMap};

use super::{CrossnetError, NetworkPartition, Ratio};
use crate::graph::{Graph, NodeId};

/// Jaccard index of two label sets; undefined when both are empty.
pub fn jaccard_similarity(a: &BTreeSet<String>, b: &BTreeSet<String>) -> Option<Ratio> {
    let inter = a.intersection(b).count() as u64;
    let union = a.union(b).count() as u64;
    Ratio::new(inter, union)
}

/// One sampled unordered pair and its similarity value.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSample {
    pub u: NodeId,
    pub v: NodeId,
    pub value: Ratio,
}

/// Similarity (or closeness) samples grouped by link class, CDF-ready.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinkClassSamples {
    pub copied: Vec<PairSample>,
    pub uncopied_copiable: Vec<PairSample>,
    pub native: Vec<PairSample>,
}

/// Interest similarity of linked user pairs, grouped into copied pairs,
/// copiable-but-uncopied pairs, and native pairs. Pairs where either user has
/// no interest data, or where the Jaccard index is undefined, are skipped.
pub fn similarity_by_link_class(
    part: &NetworkPartition,
    target: &Graph,
    interests: &HashMap<NodeId, BTreeSet<String>>,
) -> LinkClassSamples {
    let mut out = LinkClassSamples::default();
    let sample = |u: NodeId, v: NodeId| -> Option<PairSample> {
        let a = interests.get(&u)?;
        let b = interests.get(&v)?;
        jaccard_similarity(a, b).map(|value| PairSample { u, v, value })
    };

    // unordered target pairs, classified copied/native
    let mut target_pairs: Vec<(NodeId, NodeId)> = Vec::new();
    for u in 0..target.node_count() as NodeId {
        for &v in target.out_neighbors(u) {
            let pair = if u < v { (u, v) } else { (v, u) };
            target_pairs.push(pair);
        }
    }
    target_pairs.sort_unstable();
    target_pairs.dedup();
    for (u, v) in target_pairs {
        let copied = part.is_copied(u, v) || part.is_copied(v, u);
        if let Some(s) = sample(u, v) {
            if copied {
                out.copied.push(s);
            } else {
                out.native.push(s);
            }
        }
    }

    // copiable pairs with no target link in either direction
    for &(u, v) in part.copiable_pairs() {
        if !target.has_edge(u, v) && !target.has_edge(v, u) {
            if let Some(s) = sample(u, v) {
                out.uncopied_copiable.push(s);
            }
        }
    }
    out
}

/// Friend-list closeness (Jaccard of source neighbor lists) over copiable
/// pairs, split into copied and uncopied pairs. Values are computed on the
/// source graph, in target ids.
pub fn closeness_by_copy_status(part: &NetworkPartition, target: &Graph, source: &Graph) -> LinkClassSamples {
    let mut out = LinkClassSamples::default();
    for &(u, v) in part.copiable_pairs() {
        let (Some(su), Some(sv)) = (part.source_of(u), part.source_of(v)) else {
            continue;
        };
        let a = source.neighbors(su);
        let b = source.neighbors(sv);
        let inter = super::sorted_intersection_len(a, b);
        let union = (a.len() + b.len()) as u64 - inter;
        let Some(value) = Ratio::new(inter, union) else {
            continue;
        };
        let sample = PairSample { u, v, value };
        if target.has_edge(u, v) || target.has_edge(v, u) {
            out.copied.push(sample);
        } else {
            out.uncopied_copiable.push(sample);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinScale {
    Linear,
    Log,
}

/// Binning request over the x axis; bounds default to the data range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinSpec {
    pub scale: BinScale,
    pub bin_count: usize,
    pub min: Option<f64>,
    pub max: Option<f64>,
}

impl BinSpec {
    pub fn linear(bin_count: usize) -> Self {
        BinSpec {
            scale: BinScale::Linear,
            bin_count,
            min: None,
            max: None,
        }
    }

    pub fn log(bin_count: usize) -> Self {
        BinSpec {
            scale: BinScale::Log,
            bin_count,
            min: None,
            max: None,
        }
    }
}

/// One averaged trend point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinRow {
    pub bin_center: f64,
    pub mean_y: f64,
    pub stderr: f64,
    pub count: usize,
}

/// Bin y over x and report per-bin mean and standard error; undefined y
/// values (None) are dropped, empty bins omitted.
pub fn binned_series(
    xs: &[f64],
    ys: &[Option<f64>],
    spec: &BinSpec,
) -> Result<Vec<BinRow>, CrossnetError> {
    assert_eq!(xs.len(), ys.len(), "series must be aligned");
    if spec.bin_count == 0 {
        return Err(CrossnetError::BadBinSpec("bin_count must be >= 1".into()));
    }
    let points: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter_map(|(&x, y)| y.map(|y| (x, y)))
        .collect();
    if points.is_empty() {
        return Ok(Vec::new());
    }
    if spec.scale == BinScale::Log {
        if let Some(&(x, _)) = points.iter().find(|&&(x, _)| x <= 0.0) {
            return Err(CrossnetError::BadBinDomain(x));
        }
    }
    let tx = |x: f64| match spec.scale {
        BinScale::Linear => x,
        BinScale::Log => x.ln(),
    };
    let lo = tx(spec
        .min
        .unwrap_or_else(|| points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min)));
    let hi = tx(spec
        .max
        .unwrap_or_else(|| points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max)));
    if !(lo <= hi) {
        return Err(CrossnetError::BadBinSpec(format!("empty range {lo}..{hi}")));
    }
    let width = ((hi - lo) / spec.bin_count as f64).max(f64::MIN_POSITIVE);

    let mut sums = vec![(0.0f64, 0.0f64, 0usize); spec.bin_count];
    for &(x, y) in &points {
        let t = tx(x);
        if t < lo || t > hi {
            continue;
        }
        let idx = (((t - lo) / width) as usize).min(spec.bin_count - 1);
        let s = &mut sums[idx];
        s.0 += y;
        s.1 += y * y;
        s.2 += 1;
    }
    let mut rows = Vec::new();
    for (i, &(sum, sum_sq, count)) in sums.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let nf = count as f64;
        let mean = sum / nf;
        let stderr = if count < 2 {
            0.0
        } else {
            let var = ((sum_sq - sum * sum / nf) / (nf - 1.0)).max(0.0);
            (var / nf).sqrt()
        };
        let center_t = lo + (i as f64 + 0.5) * width;
        let bin_center = match spec.scale {
            BinScale::Linear => center_t,
            BinScale::Log => center_t.exp(),
        };
        rows.push(BinRow {
            bin_center,
            mean_y: mean,
            stderr,
            count,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossnet::{partition, AccountMapping};

    fn labels(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn jaccard_cases() {
        let a = labels(&["food", "art", "travel"]);
        assert_eq!(jaccard_similarity(&a, &a).unwrap(), Ratio { num: 3, den: 3 });
        let b = labels(&["music"]);
        assert_eq!(jaccard_similarity(&a, &b).unwrap(), Ratio { num: 0, den: 4 });
        let c = labels(&["art", "travel", "diy", "humor"]);
        assert_eq!(jaccard_similarity(&a, &c).unwrap(), Ratio { num: 2, den: 5 });
        assert_eq!(jaccard_similarity(&labels(&[]), &labels(&[])), None);
        // one empty side is defined: 0 / |other|
        assert_eq!(
            jaccard_similarity(&a, &labels(&[])).unwrap(),
            Ratio { num: 0, den: 3 }
        );
    }

    #[test]
    fn jaccard_symmetric_and_unit_iff_equal() {
        let a = labels(&["x", "y"]);
        let b = labels(&["y", "z"]);
        assert_eq!(jaccard_similarity(&a, &b), jaccard_similarity(&b, &a));
        let j = jaccard_similarity(&a, &b).unwrap();
        assert!(j.num != j.den);
        let j2 = jaccard_similarity(&a, &a).unwrap();
        assert_eq!(j2.num, j2.den);
    }

    fn class_setup() -> (Graph, Graph, NetworkPartition) {
        // copied pair {0,1}; native pair {0,2}; uncopied copiable {1,3}
        let (target, _) = Graph::from_edges(true, &[(0, 1), (0, 2), (3, 2)]).unwrap();
        let (source, _) = Graph::from_edges(false, &[(0, 1), (1, 3)]).unwrap();
        let mapping = AccountMapping::new(vec![(0, 0), (1, 1), (3, 3)]).unwrap();
        let part = partition(&target, &source, &mapping).unwrap();
        (target, source, part)
    }

    #[test]
    fn similarity_classes_identical_interests() {
        let (target, _source, part) = class_setup();
        let mut interests = HashMap::new();
        for u in 0..4 {
            interests.insert(u, labels(&["a", "b"]));
        }
        let s = similarity_by_link_class(&part, &target, &interests);
        assert_eq!(s.copied.len(), 1);
        assert_eq!(s.native.len(), 2);
        assert_eq!(s.uncopied_copiable.len(), 1);
        for sample in s.copied.iter().chain(&s.native).chain(&s.uncopied_copiable) {
            assert_eq!(sample.value, Ratio { num: 2, den: 2 });
        }
    }

    #[test]
    fn similarity_disjoint_interests_point_mass_at_zero() {
        let (target, _source, part) = class_setup();
        let mut interests = HashMap::new();
        let names = ["a", "b", "c", "d"];
        for u in 0..4u32 {
            interests.insert(u, labels(&[names[u as usize]]));
        }
        let s = similarity_by_link_class(&part, &target, &interests);
        for sample in s.copied.iter().chain(&s.native).chain(&s.uncopied_copiable) {
            assert_eq!(sample.value.num, 0);
        }
    }

    #[test]
    fn similarity_skips_missing_interest_nodes() {
        let (target, _source, part) = class_setup();
        let mut interests = HashMap::new();
        interests.insert(0, labels(&["a"]));
        interests.insert(1, labels(&["a"]));
        // 2 and 3 missing: native pairs {0,2}, {2,3} and copiable {1,3} drop out
        let s = similarity_by_link_class(&part, &target, &interests);
        assert_eq!(s.copied.len(), 1);
        assert!(s.native.is_empty());
        assert!(s.uncopied_copiable.is_empty());
    }

    #[test]
    fn planted_native_similarity_orders_class_means() {
        // native friends share interests, copied friends do not
        let (target, _) = Graph::from_edges(true, &[(0, 1), (0, 2)]).unwrap();
        let (source, _) = Graph::from_edges(false, &[(0, 1)]).unwrap();
        let mapping = AccountMapping::new(vec![(0, 0), (1, 1)]).unwrap();
        let part = partition(&target, &source, &mapping).unwrap();
        let mut interests = HashMap::new();
        interests.insert(0, labels(&["a", "b"]));
        interests.insert(1, labels(&["x"]));
        interests.insert(2, labels(&["a", "b"]));
        let s = similarity_by_link_class(&part, &target, &interests);
        let mean = |v: &[PairSample]| {
            v.iter().map(|p| p.value.value()).sum::<f64>() / v.len() as f64
        };
        assert!(mean(&s.native) > mean(&s.copied));
    }

    #[test]
    fn closeness_splits_by_copy_status() {
        let (target, source, part) = class_setup();
        let c = closeness_by_copy_status(&part, &target, &source);
        assert_eq!(c.copied.len(), 1);
        assert_eq!(c.uncopied_copiable.len(), 1);
        // copied pair {0,1}: L0={1}, L1={0,3}: disjoint, union 3
        assert_eq!(c.copied[0].value, Ratio { num: 0, den: 3 });
        // uncopied pair {1,3}: L1={0,3}, L3={1}: disjoint, union 3
        assert_eq!(c.uncopied_copiable[0].value, Ratio { num: 0, den: 3 });
    }

    #[test]
    fn binned_constant_series() {
        let xs: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let ys: Vec<Option<f64>> = xs.iter().map(|_| Some(4.2)).collect();
        let rows = binned_series(&xs, &ys, &BinSpec::linear(5)).unwrap();
        assert_eq!(rows.len(), 5);
        for r in &rows {
            assert!((r.mean_y - 4.2).abs() < 1e-12);
            assert!(r.stderr.abs() < 1e-9);
        }
    }

    #[test]
    fn single_bin_is_global_mean() {
        let xs = [1.0, 2.0, 3.0];
        let ys = [Some(1.0), Some(2.0), Some(6.0)];
        let rows = binned_series(&xs, &ys, &BinSpec::linear(1)).unwrap();
        assert_eq!(rows.len(), 1);
        assert!((rows[0].mean_y - 3.0).abs() < 1e-12);
        assert_eq!(rows[0].count, 3);
    }

    #[test]
    fn linear_trend_recovered_within_stderr() {
        let xs: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let ys: Vec<Option<f64>> = xs.iter().map(|&x| Some(2.0 * x)).collect();
        let rows = binned_series(&xs, &ys, &BinSpec::linear(10)).unwrap();
        for r in &rows {
            assert!((r.mean_y - 2.0 * r.bin_center).abs() <= 3.0 * r.stderr.max(1e-9) + 2.0);
        }
    }

    #[test]
    fn log_bins_reject_nonpositive() {
        let xs = [0.0, 1.0];
        let ys = [Some(1.0), Some(1.0)];
        assert!(matches!(
            binned_series(&xs, &ys, &BinSpec::log(2)),
            Err(CrossnetError::BadBinDomain(_))
        ));
    }

    #[test]
    fn undefined_y_dropped() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [Some(1.0), None, None, Some(3.0)];
        let rows = binned_series(&xs, &ys, &BinSpec::linear(1)).unwrap();
        assert_eq!(rows[0].count, 2);
        assert!((rows[0].mean_y - 2.0).abs() < 1e-12);
    }
}
