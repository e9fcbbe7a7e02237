//! Derivative-free Nelder-Mead minimizer. Deterministic given the starting
//! point: no internal randomness, ties broken by index order.

/// Standard reflection/expansion/contraction/shrink coefficients.
const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

pub struct SimplexOptions {
    pub max_iters: usize,
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
    /// Stop once the spread of objective values across the simplex drops
    /// below this.
    pub value_tolerance: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            max_iters: 400,
            initial_step: 0.5,
            value_tolerance: 1e-12,
        }
    }
}

/// Minimizes `f` from `start`, returning the best point and value seen.
pub fn minimize(
    f: impl Fn(&[f64]) -> f64,
    start: &[f64],
    options: &SimplexOptions,
) -> (Vec<f64>, f64) {
    let dim = start.len();
    if dim == 0 {
        return (Vec::new(), f(start));
    }

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((start.to_vec(), f(start)));
    for i in 0..dim {
        let mut vertex = start.to_vec();
        vertex[i] += options.initial_step;
        let value = f(&vertex);
        simplex.push((vertex, value));
    }

    for _ in 0..options.max_iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[dim].1 - simplex[0].1;
        if spread.abs() < options.value_tolerance {
            break;
        }

        // Centroid of all vertices except the worst.
        let mut centroid = vec![0.0; dim];
        for (vertex, _) in &simplex[..dim] {
            for (c, v) in centroid.iter_mut().zip(vertex) {
                *c += v / dim as f64;
            }
        }
        let worst = simplex[dim].clone();
        let second_worst = simplex[dim - 1].1;
        let best = simplex[0].1;

        let blend = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = blend(REFLECT);
        let reflected_value = f(&reflected);

        if reflected_value < best {
            let expanded = blend(EXPAND);
            let expanded_value = f(&expanded);
            simplex[dim] = if expanded_value < reflected_value {
                (expanded, expanded_value)
            } else {
                (reflected, reflected_value)
            };
            continue;
        }
        if reflected_value < second_worst {
            simplex[dim] = (reflected, reflected_value);
            continue;
        }

        let contracted = blend(-CONTRACT);
        let contracted_value = f(&contracted);
        if contracted_value < worst.1 {
            simplex[dim] = (contracted, contracted_value);
            continue;
        }

        // Shrink everything toward the best vertex.
        let anchor = simplex[0].0.clone();
        for entry in simplex.iter_mut().skip(1) {
            for (x, a) in entry.0.iter_mut().zip(&anchor) {
                *x = a + SHRINK * (*x - a);
            }
            entry.1 = f(&entry.0);
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex.swap_remove(0)
}
