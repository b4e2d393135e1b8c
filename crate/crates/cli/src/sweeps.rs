//! Parameter sweeps behind the weight surface, the angle-family ordering
//! region and the `β γ^β ≤ 1` feasibility region.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use polygamy_core::measures::angle_concurrences_closed;
use polygamy_core::polygamy::{
    angle_in_region, delta_c_closed, delta_weight, gamma_surface, weight_power_feasible, OneToGroupValues, Weight,
};
use polygamy_core::states::AngleFamily;
use rayon::prelude::*;

use crate::error::{usage, CliResult};
use crate::table::{fmt_f64, Cell, Table};

/// `steps` evenly spaced points from `min` to `max`, both included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, steps: usize) -> CliResult<Self> {
        if steps < 2 {
            return usage("a grid needs at least 2 steps");
        }
        if !(min.is_finite() && max.is_finite() && min <= max) {
            return usage(format!("invalid grid range [{min}, {max}]"));
        }
        Ok(Self { min, max, steps })
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.max
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
        }
    }
}

/// Evaluates `f` on the product grid, row-major in `(a, b)`, in parallel.
fn product<T: Send>(a: &Grid, b: &Grid, f: impl Fn(f64, f64) -> T + Sync) -> Vec<(f64, f64, T)> {
    (0..a.steps * b.steps)
        .into_par_iter()
        .map(|k| {
            let (x, y) = (a.point(k / b.steps), b.point(k % b.steps));
            (x, y, f(x, y))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSweep {
    pub table: Table,
    pub max: f64,
    pub argmax: (f64, f64),
    /// Cells above `√2 − 1 + 1e-12`.
    pub above_bound: usize,
}

/// Weight surface over `x = λ2/λ4`, `y = λ3/λ4`. Columns `x, y, gamma`.
pub fn sweep_fig3(x: &Grid, y: &Grid) -> SurfaceSweep {
    let cells = product(x, y, gamma_surface);
    let bound = SQRT_2 - 1.0 + 1e-12;
    let mut table = Table::new(&["x", "y", "gamma"]);
    let (mut max, mut argmax, mut above) = (f64::NEG_INFINITY, (0.0, 0.0), 0);
    for (x, y, g) in cells {
        if g > max {
            (max, argmax) = (g, (x, y));
        }
        above += usize::from(g > bound);
        table.rows.push(vec![Cell::Num(x), Cell::Num(y), Cell::Num(g)]);
    }
    table.footer.push(format!(
        "grid maximum {} at x={} y={}",
        fmt_f64(max),
        fmt_f64(argmax.0),
        fmt_f64(argmax.1)
    ));
    table.footer.push(format!("supremum sqrt(2)-1 = {}", fmt_f64(SQRT_2 - 1.0)));
    SurfaceSweep {
        table,
        max,
        argmax,
        above_bound: above,
    }
}

/// Angle-family ordering region over `[0, π/2]²`. Columns
/// `theta, phi, in_region, delta, delta_sorted`: `delta` is the closed form
/// (NaN outside the region), `delta_sorted` the one-to-group weight of the
/// sorted concurrences (NaN when infinite).
pub fn region_fig4(steps: usize) -> CliResult<Table> {
    let g = Grid::new(0.0, FRAC_PI_2, steps)?;
    let cells = product(&g, &g, |theta, phi| {
        let p = AngleFamily::new(theta, phi).expect("grid stays in range");
        let inside = angle_in_region(&p);
        let delta = if inside { delta_c_closed(&p).unwrap_or(f64::NAN) } else { f64::NAN };
        let [a, b, c] = angle_concurrences_closed(&p);
        let sorted = OneToGroupValues::new(a, b, c)
            .and_then(|v| delta_weight(&v))
            .map(|r| match r.weight {
                Weight::Infinite => f64::NAN,
                w => w.value(),
            })
            .unwrap_or(f64::NAN);
        (inside, delta, sorted)
    });
    let mut table = Table::new(&["theta", "phi", "in_region", "delta", "delta_sorted"]);
    let mut inside_count = 0usize;
    for (theta, phi, (inside, delta, sorted)) in cells {
        inside_count += usize::from(inside);
        table.rows.push(vec![
            Cell::Num(theta),
            Cell::Num(phi),
            Cell::Bool(inside),
            Cell::Num(delta),
            Cell::Num(sorted),
        ]);
    }
    table.footer.push(format!("{inside_count} of {} cells in region", steps * steps));
    Ok(table)
}

/// Feasibility of `β γ^β ≤ 1` for `β` in `(0, 1]` (grid `k/beta_steps`)
/// and `γ` in `[0, gamma_max]`. Columns `beta, gamma, feasible`.
pub fn region_fig5(beta_steps: usize, gamma_max: f64, gamma_steps: usize) -> CliResult<Table> {
    if beta_steps == 0 {
        return usage("beta grid needs at least 1 step");
    }
    let gammas = Grid::new(0.0, gamma_max, gamma_steps)?;
    // β_k = k / beta_steps; built directly since one step is allowed here
    let betas = Grid {
        min: 1.0 / beta_steps as f64,
        max: 1.0,
        steps: beta_steps,
    };
    let cells = product(&betas, &gammas, weight_power_feasible);
    let mut table = Table::new(&["beta", "gamma", "feasible"]);
    let mut feasible = 0usize;
    for (b, g, ok) in cells {
        feasible += usize::from(ok);
        table.rows.push(vec![Cell::Num(b), Cell::Num(g), Cell::Bool(ok)]);
    }
    table.footer.push(format!("{feasible} of {} cells feasible", table.rows.len()));
    Ok(table)
}
