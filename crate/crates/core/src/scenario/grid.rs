use crate::error::{Result, RiskError};
use crate::grasp::GridOffset;

const AXES: [&str; 6] = ["x", "y", "z", "roll", "pitch", "yaw"];

/// Parses a sweep grid such as `x=-0.015:0.015:7,y=-0.015:0.015:7`.
///
/// Each term is `axis=min:max:count` (or `axis=value`) over the axes
/// `x, y, z, roll, pitch, yaw`; unlisted axes stay at zero. The first listed
/// axis varies slowest.
pub fn parse_grid(spec: &str) -> Result<Vec<GridOffset>> {
    let err = |msg: String| RiskError::validation("grid", msg);
    let mut axes: Vec<(usize, Vec<f64>)> = Vec::new();
    for term in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (name, range) = term
            .split_once('=')
            .ok_or_else(|| err(format!("expected `axis=min:max:count`, got `{term}`")))?;
        let axis = AXES
            .iter()
            .position(|a| *a == name.trim())
            .ok_or_else(|| err(format!("unknown axis `{name}`")))?;
        if axes.iter().any(|(a, _)| *a == axis) {
            return Err(err(format!("axis `{name}` listed twice")));
        }
        let parts: Vec<&str> = range.split(':').map(str::trim).collect();
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(format!("invalid number `{s}` in `{term}`")))
        };
        let values = match parts.as_slice() {
            [v] => vec![num(v)?],
            [lo, hi, n] => {
                let lo = num(lo)?;
                let hi = num(hi)?;
                let n: usize = n
                    .parse()
                    .ok()
                    .filter(|n| *n >= 1)
                    .ok_or_else(|| err(format!("invalid count `{n}` in `{term}`")))?;
                if n == 1 {
                    vec![lo]
                } else {
                    (0..n)
                        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                        .collect()
                }
            }
            _ => return Err(err(format!("expected `axis=min:max:count`, got `{term}`"))),
        };
        axes.push((axis, values));
    }
    if axes.is_empty() {
        return Err(err("grid specification is empty".into()));
    }

    let mut out = vec![[0.0f64; 6]];
    for (axis, values) in &axes {
        out = out
            .iter()
            .flat_map(|base| {
                values.iter().map(move |v| {
                    let mut cell = *base;
                    cell[*axis] = *v;
                    cell
                })
            })
            .collect();
    }
    Ok(out
        .into_iter()
        .map(|c| GridOffset {
            translation: [c[0], c[1], c[2]],
            rpy: [c[3], c[4], c[5]],
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartesian_product_in_order() {
        let g = parse_grid("x=-1:1:3, yaw=0.5").unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g[0].translation, [-1.0, 0.0, 0.0]);
        assert_eq!(g[2].translation, [1.0, 0.0, 0.0]);
        assert!(g.iter().all(|c| c.rpy == [0.0, 0.0, 0.5]));

        let g = parse_grid("x=0:1:2,y=0:1:2").unwrap();
        let xy: Vec<[f64; 2]> = g
            .iter()
            .map(|c| [c.translation[0], c.translation[1]])
            .collect();
        assert_eq!(xy, vec![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]);
    }

    #[test]
    fn rejects_malformed_terms() {
        for bad in ["", "w=0:1:2", "x=0:1", "x=0:1:0", "x=a:1:2", "x=0,x=1"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }
}
