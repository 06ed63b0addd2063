//! Grid-robust local extremum detection on sampled spectra.

/// Default minimum prominence for dip detection in R.
pub const DIP_PROMINENCE: f64 = 1e-3;

/// Indices of interior local minima (3-point criterion, plateaus resolved
/// to their first sample) whose topographic prominence is at least
/// `min_prominence`.
pub fn local_minima(values: &[f64], min_prominence: f64) -> Vec<usize> {
    let n = values.len();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if values[i] < values[i - 1] {
            // walk over a flat bottom
            let mut j = i;
            while j + 1 < n && values[j + 1] == values[i] {
                j += 1;
            }
            if j + 1 < n && values[j + 1] > values[i] && prominence_min(values, i, j) >= min_prominence {
                out.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// Local maxima, by symmetry with [`local_minima`].
pub fn local_maxima(values: &[f64], min_prominence: f64) -> Vec<usize> {
    let neg: Vec<f64> = values.iter().map(|v| -v).collect();
    local_minima(&neg, min_prominence)
}

/// Height a minimum spanning [lo, hi] must climb on its lower side before
/// reaching a deeper point or the edge of the data.
fn prominence_min(values: &[f64], lo: usize, hi: usize) -> f64 {
    let v = values[lo];
    let climb = |it: &mut dyn Iterator<Item = &f64>| {
        let mut peak = v;
        for &x in it {
            if x < v {
                return peak - v;
            }
            peak = peak.max(x);
        }
        peak - v
    };
    let left = climb(&mut values[..lo].iter().rev());
    let right = climb(&mut values[hi + 1..].iter());
    left.min(right)
}
