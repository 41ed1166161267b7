//! Derivative-free minimizers and sphere sampling.

/// Minimizes `f` on `[a, b]`, returning `(x, f(x))` for the best point seen.
pub fn golden_section(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, iterations: usize) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iterations {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Nelder–Mead simplex search from `x0` with initial edge `step`.
///
/// Stops after `max_evals` evaluations or when the simplex values agree to
/// `ftol`. Returns the best vertex and its value.
pub fn nelder_mead<const N: usize>(
    f: impl Fn(&[f64; N]) -> f64,
    x0: [f64; N],
    step: f64,
    max_evals: usize,
    ftol: f64,
) -> ([f64; N], f64) {
    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    simplex.push((x0, f(&x0)));
    for i in 0..N {
        let mut x = x0;
        x[i] += step;
        simplex.push((x, f(&x)));
    }
    let mut evals = N + 1;

    let lerp = |a: &[f64; N], b: &[f64; N], t: f64| -> [f64; N] {
        std::array::from_fn(|i| a[i] + t * (b[i] - a[i]))
    };

    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0].1, simplex[N].1);
        if (worst - best).abs() <= ftol {
            break;
        }
        let mut centroid = [0.0; N];
        for (x, _) in &simplex[..N] {
            for i in 0..N {
                centroid[i] += x[i] / N as f64;
            }
        }
        let xw = simplex[N].0;
        let xr = lerp(&centroid, &xw, -1.0);
        let fr = f(&xr);
        evals += 1;
        if fr < best {
            let xe = lerp(&centroid, &xw, -2.0);
            let fe = f(&xe);
            evals += 1;
            simplex[N] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[N - 1].1 {
            simplex[N] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst {
            let xc = lerp(&centroid, &xr, 0.5);
            (xc, f(&xc))
        } else {
            let xc = lerp(&centroid, &xw, 0.5);
            (xc, f(&xc))
        };
        evals += 1;
        if fc < worst.min(fr) {
            simplex[N] = (xc, fc);
            continue;
        }
        let x_best = simplex[0].0;
        for v in simplex.iter_mut().skip(1) {
            v.0 = lerp(&x_best, &v.0, 0.5);
            v.1 = f(&v.0);
        }
        evals += N;
    }
    simplex
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty simplex")
}

/// `n` nearly uniform unit vectors on a Fibonacci lattice.
pub fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden_angle = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden_angle * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

pub fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: &[f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

pub fn normalize(a: [f64; 3]) -> [f64; 3] {
    let n = norm(&a);
    [a[0] / n, a[1] / n, a[2] / n]
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Orthonormal basis of the plane tangent to the unit vector `n`.
pub fn tangent_basis(n: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let helper = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let t1 = normalize(cross(n, &helper));
    let t2 = cross(n, &t1);
    (t1, t2)
}

/// `normalize(n + a·t1 + b·t2)`: gnomonic chart around `n`.
pub fn chart(n: &[f64; 3], basis: &([f64; 3], [f64; 3]), a: f64, b: f64) -> [f64; 3] {
    let (t1, t2) = basis;
    normalize(std::array::from_fn(|i| n[i] + a * t1[i] + b * t2[i]))
}
