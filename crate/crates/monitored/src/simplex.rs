use kekule_core::Color;
use serde::{Deserialize, Serialize};

use crate::MonitoredError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplexPoint {
    pub px: f64,
    pub py: f64,
    pub pz: f64,
}

impl SimplexPoint {
    pub fn new(px: f64, py: f64, pz: f64) -> Result<Self, MonitoredError> {
        let ok = [px, py, pz].iter().all(|p| (0.0..=1.0).contains(p)) && (px + py + pz - 1.0).abs() <= 1e-12;
        if !ok {
            return Err(MonitoredError::Point(format!("({}, {}, {}) is not on the simplex", px, py, pz)));
        }
        Ok(SimplexPoint { px, py, pz })
    }

    pub fn corner(c: Color) -> Self {
        let mut p = [0.0; 3];
        p[c.index()] = 1.0;
        SimplexPoint { px: p[0], py: p[1], pz: p[2] }
    }

    pub fn center() -> Self {
        SimplexPoint { px: 1.0 / 3.0, py: 1.0 / 3.0, pz: 1.0 / 3.0 }
    }

    /// Point on the edge where `absent` has probability zero; `f` is the share of the first
    /// remaining color in (x, y, z) order.
    pub fn on_edge(absent: Color, f: f64) -> Self {
        let others: Vec<Color> = Color::ALL.into_iter().filter(|&c| c != absent).collect();
        let mut p = [0.0; 3];
        p[others[0].index()] = f;
        p[others[1].index()] = 1.0 - f;
        SimplexPoint { px: p[0], py: p[1], pz: p[2] }
    }

    pub fn prob(&self, c: Color) -> f64 {
        match c {
            Color::X => self.px,
            Color::Y => self.py,
            Color::Z => self.pz,
        }
    }

    /// Color for a uniform draw `u` in [0, 1).
    pub fn pick(&self, u: f64) -> Color {
        if u < self.px {
            Color::X
        } else if u < self.px + self.py {
            Color::Y
        } else {
            Color::Z
        }
    }
}

/// All points (i, j, k) / res with i + j + k = res.
pub fn simplex_grid(res: usize) -> Vec<SimplexPoint> {
    if res == 0 {
        return vec![SimplexPoint::center()];
    }
    let mut v = Vec::new();
    for i in 0..=res {
        for j in 0..=res - i {
            let k = res - i - j;
            let r = res as f64;
            v.push(SimplexPoint { px: i as f64 / r, py: j as f64 / r, pz: k as f64 / r });
        }
    }
    v
}
