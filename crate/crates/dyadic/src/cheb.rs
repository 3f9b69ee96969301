//! Piecewise Chebyshev interpolation on equal panels.

pub struct ChebPiecewise {
    a: f64,
    width: f64,
    coeffs: Vec<Vec<f64>>,
}

impl ChebPiecewise {
    pub fn build<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, degree: usize) -> Self {
        let width = (b - a) / panels as f64;
        let n = degree + 1;
        let nodes: Vec<f64> = (0..n)
            .map(|i| (std::f64::consts::PI * (i as f64 + 0.5) / n as f64).cos())
            .collect();
        let coeffs = (0..panels)
            .map(|p| {
                let c = a + width * (p as f64 + 0.5);
                let vals: Vec<f64> = nodes.iter().map(|x| f(c + 0.5 * width * x)).collect();
                (0..n)
                    .map(|m| {
                        let s: f64 = vals
                            .iter()
                            .enumerate()
                            .map(|(i, v)| {
                                v * (std::f64::consts::PI * m as f64 * (i as f64 + 0.5) / n as f64)
                                    .cos()
                            })
                            .sum();
                        if m == 0 {
                            s / n as f64
                        } else {
                            2.0 * s / n as f64
                        }
                    })
                    .collect()
            })
            .collect();
        ChebPiecewise { a, width, coeffs }
    }

    #[allow(dead_code)]
    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.a + self.width * self.coeffs.len() as f64
    }

    pub fn eval(&self, x: f64) -> f64 {
        let p = (((x - self.a) / self.width).floor().max(0.0) as usize).min(self.coeffs.len() - 1);
        let c = self.a + self.width * (p as f64 + 0.5);
        let u = 2.0 * (x - c) / self.width;
        // Clenshaw
        let cs = &self.coeffs[p];
        let (mut b1, mut b2) = (0.0, 0.0);
        for &ck in cs.iter().skip(1).rev() {
            let b0 = ck + 2.0 * u * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        cs[0] + u * b1 - b2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_smooth_function() {
        let t = ChebPiecewise::build(|x| (3.0 * x).sin() * x.exp(), -2.0, 3.0, 10, 16);
        for i in 0..=500 {
            let x = -2.0 + 0.01 * i as f64;
            assert!(
                (t.eval(x) - (3.0 * x).sin() * x.exp()).abs() < 1e-13,
                "x={x}"
            );
        }
    }
}
