//! Finite-difference weights on arbitrary stencils.

/// Weights for the `order`-th derivative at `x0` from samples at `xs`
/// (Fornberg's recursion).
pub fn fornberg(x0: f64, xs: &[f64], order: usize) -> Vec<f64> {
    let n = xs.len();
    assert!(n > order, "stencil too small for derivative order");
    // c[j][k]: weight of node j for derivative k
    let mut c = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] *= c4 / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Central stencil of fourth-order accuracy for the `order`-th derivative on
/// unit spacing: integer offsets and weights.
pub fn central_stencil(order: usize) -> (Vec<i32>, Vec<f64>) {
    if order == 0 {
        return (vec![0], vec![1.0]);
    }
    let half = ((order + 1) / 2 - 1 + 2) as i32;
    let offs: Vec<i32> = (-half..=half).collect();
    let xs: Vec<f64> = offs.iter().map(|&o| o as f64).collect();
    let w = fornberg(0.0, &xs, order);
    (offs, w)
}

/// Directional `order`-th derivative of a scalar function of one variable.
pub fn derivative_1d<F: Fn(f64) -> f64>(f: F, x: f64, order: usize, h: f64) -> f64 {
    let (offs, w) = central_stencil(order);
    let mut acc = 0.0;
    for (o, wk) in offs.iter().zip(&w) {
        if *wk != 0.0 {
            acc += wk * f(x + *o as f64 * h);
        }
    }
    acc / h.powi(order as i32)
}

/// Mixed partial derivative of a function of three variables, built as the
/// tensor product of one-dimensional central stencils.
pub fn mixed_partial<F: Fn([f64; 3]) -> f64>(f: &F, p: [f64; 3], orders: [usize; 3], h: [f64; 3]) -> f64 {
    mixed_partial_vec(&|q| [f(q)], p, orders, h)[0]
}

/// Component-wise [`mixed_partial`] of a vector-valued function.
pub fn mixed_partial_vec<const K: usize, F: Fn([f64; 3]) -> [f64; K]>(
    f: &F,
    p: [f64; 3],
    orders: [usize; 3],
    h: [f64; 3],
) -> [f64; K] {
    let st: Vec<(Vec<i32>, Vec<f64>)> = orders.iter().map(|&o| central_stencil(o)).collect();
    let mut acc = [0.0; K];
    for (a, wa) in st[0].0.iter().zip(&st[0].1) {
        if *wa == 0.0 {
            continue;
        }
        for (b, wb) in st[1].0.iter().zip(&st[1].1) {
            if *wb == 0.0 {
                continue;
            }
            for (c, wc) in st[2].0.iter().zip(&st[2].1) {
                if *wc == 0.0 {
                    continue;
                }
                let q = [p[0] + *a as f64 * h[0], p[1] + *b as f64 * h[1], p[2] + *c as f64 * h[2]];
                let w = wa * wb * wc;
                for (s, v) in acc.iter_mut().zip(f(q)) {
                    *s += w * v;
                }
            }
        }
    }
    let scale = h[0].powi(orders[0] as i32) * h[1].powi(orders[1] as i32) * h[2].powi(orders[2] as i32);
    acc.map(|v| v / scale)
}
