//! Small numeric helpers shared across modules.

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for v in iter {
            s.add(v);
        }
        s
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().collect::<CompensatedSum>().value()
}

/// 17 significant digits; parses back to the identical `f64`.
pub fn format_rate(v: f64) -> String {
    format!("{v:.16e}")
}

/// In-place unnormalized Walsh-Hadamard transform; `data.len()` must be a power of two.
pub fn walsh_hadamard(data: &mut [f64]) {
    let len = data.len();
    assert!(len.is_power_of_two(), "length must be a power of two");
    let mut h = 1;
    while h < len {
        for block in (0..len).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (data[i], data[i + h]);
                data[i] = a + b;
                data[i + h] = a - b;
            }
        }
        h *= 2;
    }
}
