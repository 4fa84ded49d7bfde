//! Writers for test, classification and baseline outputs.

use crate::error::{Error, Result};
use crate::io::dataset::write_csv;
use crate::network::{EdgeIndexMap, NodeMetadata};
use crate::testing::classify::ClassificationResult;
use crate::testing::fisher::FisherBaseline;
use crate::testing::{group_degrees, test_degree, DegreeGroup, TestReport};

fn f(x: f64) -> String {
    format!("{x:?}")
}

fn check_len(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            what,
            expected,
            found,
        })
    }
}

pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::parse(0, e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))
}

/// One row per edge with 1-based node pairs `v > u`.
pub fn edges_csv(report: &TestReport, map: &EdgeIndexMap) -> Result<String> {
    check_len("edge results", map.edges(), report.rho_exceed.len())?;
    let header = ["l", "v", "u", "rho_exceed", "edge_diff", "significant"].map(String::from);
    let rows = map.pairs().enumerate().map(|(l, (v, u))| {
        vec![
            (l + 1).to_string(),
            (v + 1).to_string(),
            (u + 1).to_string(),
            f(report.rho_exceed[l]),
            f(report.edge_diff[l]),
            u8::from(report.significant_edges[l]).to_string(),
        ]
    });
    write_csv(std::iter::once(header.to_vec()).chain(rows))
}

/// Symmetric `V × V` matrix of an edge vector, zero diagonal.
pub fn edge_matrix_csv(values: &[f64], map: &EdgeIndexMap) -> Result<String> {
    check_len("edge values", map.edges(), values.len())?;
    let v = map.nodes();
    let mut m = vec![vec![0.0; v]; v];
    for ((a, b), &x) in map.pairs().zip(values) {
        m[a][b] = x;
        m[b][a] = x;
    }
    write_csv(m.into_iter().map(|row| row.into_iter().map(f).collect()))
}

/// Per node: test degree, with names and anatomy when metadata is given.
pub fn degree_csv(report: &TestReport, map: &EdgeIndexMap, metadata: Option<&NodeMetadata>) -> Result<String> {
    let degree = test_degree(&report.significant_edges, map)?;
    if let Some(m) = metadata {
        check_len("node metadata rows", degree.len(), m.len())?;
    }
    let header = ["node", "name", "hemisphere", "lobe", "degree"].map(String::from);
    let rows = degree.iter().enumerate().map(|(i, d)| {
        let (name, hemi, lobe) = match metadata {
            Some(m) => {
                let n = &m.nodes()[i];
                (n.name.clone(), n.hemisphere.code().to_string(), n.lobe.clone())
            }
            None => (String::new(), String::new(), String::new()),
        };
        vec![(i + 1).to_string(), name, hemi, lobe, d.to_string()]
    });
    write_csv(std::iter::once(header.to_vec()).chain(rows))
}

pub fn degree_groups(report: &TestReport, map: &EdgeIndexMap, metadata: &NodeMetadata) -> Result<Vec<DegreeGroup>> {
    group_degrees(&test_degree(&report.significant_edges, map)?, metadata)
}

pub fn degree_groups_csv(groups: &[DegreeGroup]) -> Result<String> {
    let header = ["hemisphere", "lobe", "nodes", "total_degree", "max_degree"].map(String::from);
    let rows = groups.iter().map(|g| {
        vec![
            g.hemisphere.code().to_string(),
            g.lobe.clone(),
            g.nodes.to_string(),
            g.total_degree.to_string(),
            g.max_degree.to_string(),
        ]
    });
    write_csv(std::iter::once(header.to_vec()).chain(rows))
}

pub fn predictions_csv(result: &ClassificationResult) -> Result<String> {
    let header = ["subject_id", "label", "probability", "predicted"].map(String::from);
    let rows = (0..result.subject_ids.len()).map(|i| {
        vec![
            result.subject_ids[i].clone(),
            result.labels[i].index().to_string(),
            f(result.probabilities[i]),
            result.predicted[i].index().to_string(),
        ]
    });
    write_csv(std::iter::once(header.to_vec()).chain(rows))
}

pub fn fisher_csv(baseline: &FisherBaseline, map: &EdgeIndexMap) -> Result<String> {
    check_len("Fisher p-values", map.edges(), baseline.p_values.len())?;
    let header = ["l", "v", "u", "p_value", "rejected"].map(String::from);
    let rows = map.pairs().enumerate().map(|(l, (v, u))| {
        vec![
            (l + 1).to_string(),
            (v + 1).to_string(),
            (u + 1).to_string(),
            f(baseline.p_values[l]),
            u8::from(baseline.rejected[l]).to_string(),
        ]
    });
    write_csv(std::iter::once(header.to_vec()).chain(rows))
}

/// Short markdown summary. Lists at most `top` edges by exceedance probability.
pub fn summary_markdown(
    report: &TestReport,
    map: &EdgeIndexMap,
    fisher: Option<&FisherBaseline>,
    classification: Option<&ClassificationResult>,
    top: usize,
) -> Result<String> {
    check_len("edge results", map.edges(), report.rho_exceed.len())?;
    let mut out = String::from("# Network comparison\n\n");
    out.push_str(&format!("- nodes: {}\n", report.nodes));
    out.push_str(&format!("- Pr(H1 | data): {:.4}\n", report.pr_h1));
    out.push_str(&format!(
        "- edges with Pr(rho > {}) > {}: {} of {}\n",
        report.epsilon,
        report.decision_cutoff,
        report.significant_count(),
        map.edges()
    ));
    if let Some(fb) = fisher {
        let n = fb.rejected.iter().filter(|&&r| r).count();
        out.push_str(&format!(
            "- Fisher + BH rejections at FDR {}: {n}\n",
            fb.fdr_level
        ));
    }
    if let Some(c) = classification {
        out.push_str(&format!(
            "- classification: AUC {:.4}, accuracy {:.4} over {} subjects\n",
            c.auc,
            c.accuracy,
            c.subject_ids.len()
        ));
    }
    let mut order: Vec<usize> = (0..map.edges()).collect();
    order.sort_by(|&a, &b| report.rho_exceed[b].total_cmp(&report.rho_exceed[a]).then(a.cmp(&b)));
    let pairs: Vec<(usize, usize)> = map.pairs().collect();
    out.push_str("\n| v | u | Pr(rho > eps) | edge diff |\n|---|---|---|---|\n");
    for &l in order.iter().take(top) {
        let (v, u) = pairs[l];
        out.push_str(&format!(
            "| {} | {} | {:.4} | {:+.4} |\n",
            v + 1,
            u + 1,
            report.rho_exceed[l],
            report.edge_diff[l]
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{Hemisphere, NodeInfo};

    fn report() -> TestReport {
        TestReport {
            nodes: 3,
            pr_h1: 0.9,
            epsilon: 0.1,
            decision_cutoff: 0.95,
            rho_exceed: vec![0.99, 0.2, 0.97],
            edge_diff: vec![0.5, 0.0, -0.25],
            significant_edges: vec![true, false, true],
        }
    }

    #[test]
    fn edge_outputs() {
        let map = EdgeIndexMap::new(3).unwrap();
        let csv = edges_csv(&report(), &map).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "l,v,u,rho_exceed,edge_diff,significant");
        assert_eq!(lines[1], "1,2,1,0.99,0.5,1");
        assert_eq!(lines[3], "3,3,2,0.97,-0.25,1");
        let m = edge_matrix_csv(&report().edge_diff, &map).unwrap();
        assert_eq!(m, "0.0,0.5,0.0\n0.5,0.0,-0.25\n0.0,-0.25,0.0\n");
        let d = degree_csv(&report(), &map, None).unwrap();
        assert_eq!(d.lines().nth(2).unwrap(), "2,,,,2");
    }

    #[test]
    fn grouped_degrees() {
        let map = EdgeIndexMap::new(3).unwrap();
        let meta = NodeMetadata::new(
            ["a", "b", "c"]
                .iter()
                .zip([Hemisphere::Left, Hemisphere::Left, Hemisphere::Right])
                .map(|(n, h)| NodeInfo {
                    name: n.to_string(),
                    hemisphere: h,
                    lobe: "frontal".into(),
                })
                .collect(),
        )
        .unwrap();
        let groups = degree_groups(&report(), &map, &meta).unwrap();
        let csv = degree_groups_csv(&groups).unwrap();
        assert_eq!(
            csv,
            "hemisphere,lobe,nodes,total_degree,max_degree\nL,frontal,2,3,2\nR,frontal,1,1,1\n"
        );
        let md = summary_markdown(&report(), &map, None, None, 2).unwrap();
        assert!(md.contains("| 2 | 1 | 0.9900 | +0.5000 |"));
        assert_eq!(md.matches("\n| ").count(), 3);
    }
}
