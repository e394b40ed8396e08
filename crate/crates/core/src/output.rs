//! CSV and JSON writers for trajectories, paths and reduced Euler-top runs.
//!
//! Numbers are written with 17 significant digits (`{:.16e}`) so files
//! round-trip to the same `f64` and identical runs give identical bytes.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::hamiltonian::{evaluate_hamiltonian, Trajectory};
use crate::lagrangian::DiscretePath;
use crate::symmetry::{casimir, rotational_energy, BodyAngularMomentum};
use crate::systems::MechanicalSystem;

/// A column-labelled numeric table with an optional metadata line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

impl Table {
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        if let Some(meta) = &self.meta {
            writeln!(w, "# meta: {meta}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|x| format_number(*x)).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("finite table serializes");
        s.push('\n');
        s
    }
}

fn indexed(prefix: &str, n: usize) -> impl Iterator<Item = String> + '_ {
    (0..n).map(move |i| format!("{prefix}{i}"))
}

/// `t,q0..q{d−1},p0..p{d−1},H` with a `# meta:` line naming the system,
/// method and step.
pub fn trajectory_table(system: &MechanicalSystem, traj: &Trajectory) -> Result<Table> {
    let nq = system.manifold().coord_len();
    let np = system.dim();
    let columns = std::iter::once("t".to_string())
        .chain(indexed("q", nq))
        .chain(indexed("p", np))
        .chain(std::iter::once("H".to_string()))
        .collect();
    let mut rows = Vec::with_capacity(traj.len());
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let mut row = Vec::with_capacity(nq + np + 2);
        row.push(*t);
        row.extend_from_slice(s.q().coords());
        row.extend_from_slice(s.p().components());
        row.push(evaluate_hamiltonian(system, s)?);
        rows.push(row);
    }
    Ok(Table {
        meta: Some(format!(
            "system={} method={} h={}",
            system.name(),
            traj.method,
            format_number(traj.step)
        )),
        columns,
        rows,
    })
}

/// `t,q0..q{d−1}`.
pub fn path_table(path: &DiscretePath) -> Table {
    let nq = path.manifold().coord_len();
    Table {
        meta: None,
        columns: std::iter::once("t".to_string()).chain(indexed("q", nq)).collect(),
        rows: path
            .times()
            .iter()
            .zip(path.points())
            .map(|(t, p)| std::iter::once(*t).chain(p.coords().iter().copied()).collect())
            .collect(),
    }
}

/// `t,Pi1,Pi2,Pi3,casimir,energy`.
pub fn euler_top_table(b0: &BodyAngularMomentum, h: f64, samples: &[[f64; 3]]) -> Table {
    Table {
        meta: None,
        columns: ["t", "Pi1", "Pi2", "Pi3", "casimir", "energy"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows: samples
            .iter()
            .enumerate()
            .map(|(i, pi)| {
                let b = b0.with_pi(*pi);
                vec![i as f64 * h, pi[0], pi[1], pi[2], casimir(&b), rotational_energy(&b)]
            })
            .collect(),
    }
}
