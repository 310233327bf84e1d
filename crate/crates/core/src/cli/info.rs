//! Eigenvalue tables of `Δ̂` behind `hypoheat info`.

use serde::Serialize;

use crate::error::Result;
use crate::groups::GroupTag;
use crate::specfun::{default_truncation, mathieu_spectrum, Parity};

/// One eigenvalue of the Fourier-side Laplacian at a dual parameter.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenRow {
    pub group: &'static str,
    pub dual: String,
    pub index: i64,
    pub eigenvalue: f64,
}

fn row(tag: GroupTag, dual: String, index: i64, eigenvalue: f64) -> EigenRow {
    EigenRow {
        group: tag.as_str(),
        dual,
        index,
        eigenvalue,
    }
}

/// A short table for `tag`, from the closed forms (SE(2) from the Mathieu
/// characteristic values).
pub fn eigenvalue_table(tag: GroupTag) -> Result<Vec<EigenRow>> {
    let mut rows = Vec::new();
    match tag {
        GroupTag::H2 => {
            for lambda in [0.5, 1.0, 2.0] {
                for n in 0..5i64 {
                    rows.push(row(
                        tag,
                        format!("lambda={lambda}"),
                        n,
                        -lambda * (2 * n + 1) as f64,
                    ));
                }
            }
        }
        GroupTag::SU2 => {
            for n in 0..5i64 {
                for k in 0..=n {
                    let (k, nf) = (k as f64, n as f64);
                    rows.push(row(tag, format!("n={n}"), k as i64, k * k - k * nf - nf / 2.0));
                }
            }
        }
        GroupTag::SO3 => {
            for r in 0..4i64 {
                for s in -r..=r {
                    rows.push(row(tag, format!("r={r}"), s, (s * s - r * (r + 1)) as f64));
                }
            }
        }
        GroupTag::SL2 => {
            for n in [1.0, 1.5, 2.0] {
                for m in 0..5i64 {
                    let mf = m as f64;
                    rows.push(row(
                        tag,
                        format!("discrete n=±{n}"),
                        m,
                        -(n + 2.0 * mf * n + mf * mf),
                    ));
                }
            }
            let v: f64 = 1.0;
            for m in -2..=2i64 {
                let mf = m as f64;
                rows.push(row(
                    tag,
                    format!("continuous j=0 v={v}"),
                    m,
                    -(mf * mf + v * v + 0.25),
                ));
            }
            for m in -2..=2i64 {
                let mf = m as f64;
                rows.push(row(
                    tag,
                    format!("continuous j=1/2 v={v}"),
                    m,
                    -(mf * mf + mf + v * v + 0.5),
                ));
            }
        }
        GroupTag::SE2 => {
            for lambda in [1.0, 2.0, 4.0] {
                let q: f64 = lambda * lambda / 4.0;
                let basis = mathieu_spectrum(q, 4, default_truncation(q, 4))?;
                for f in basis.functions() {
                    let kind = match f.parity {
                        Parity::Even => "ce",
                        Parity::Odd => "se",
                    };
                    rows.push(row(
                        tag,
                        format!("lambda={lambda} {kind}"),
                        f.order as i64,
                        -lambda * lambda / 2.0 - f.eigenvalue,
                    ));
                }
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_entries() {
        let su2 = eigenvalue_table(GroupTag::SU2).unwrap();
        // n = 2, k = 1: 1 − 2 − 1
        assert!(su2
            .iter()
            .any(|r| r.dual == "n=2" && r.index == 1 && r.eigenvalue == -2.0));
        let se2 = eigenvalue_table(GroupTag::SE2).unwrap();
        // small q: a_0 ≈ −q²/2, so the top eigenvalue is close to −λ²/2
        let top = se2
            .iter()
            .find(|r| r.dual == "lambda=1 ce" && r.index == 0)
            .unwrap();
        assert!(
            (top.eigenvalue + 0.5 - 0.25 * 0.25 / 2.0).abs() < 1e-3,
            "{}",
            top.eigenvalue
        );
    }
}
