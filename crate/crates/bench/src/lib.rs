//! Fixtures shared by the benchmarks.

use flextile::{wheel_pot_s12, wheel_pot_s3, Multigraph, Pot};

/// A wheel with its vertices shuffled by a fixed stride, so canonical
/// labeling has real work to do.
pub fn scrambled_wheel(n: usize) -> Multigraph {
    let w = Multigraph::wheel(n).expect("n >= 4");
    let stride = (1..n).rev().find(|s| gcd(*s, n) == 1).unwrap_or(1);
    let perm: Vec<usize> = (0..n).map(|v| (v * stride + 1) % n).collect();
    w.permuted(&perm)
}

pub fn s12(n: usize) -> Pot {
    wheel_pot_s12(n).expect("n >= 4")
}

pub fn s3(n: usize) -> Pot {
    wheel_pot_s3(n).expect("n >= 4")
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
