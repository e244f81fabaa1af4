//! Coplanar configurations: on a common great circle the Hurwitz action is
//! affine on angles, so exactly-fixed coplanar tuples are the solutions of
//! an integer congruence. They are found here by diagonalizing the integer
//! matrix with unimodular row and column operations.

use num_integer::Integer;

use crate::braid::BraidWord;

/// Integer matrix of the angle action: `a ↦ A a` on angle vectors (in
/// units of full turns), letters applied left to right.
pub fn angle_action(b: &BraidWord) -> Vec<Vec<i64>> {
    let n = b.strands();
    let mut a: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    for &g in b.letters() {
        let i = g.unsigned_abs() as usize - 1;
        // rows i, i+1 of G·A
        let (ri, rj) = (a[i].clone(), a[i + 1].clone());
        if g > 0 {
            a[i] = ri.iter().zip(&rj).map(|(x, y)| 2 * x - y).collect();
            a[i + 1] = ri;
        } else {
            a[i] = rj.clone();
            a[i + 1] = rj.iter().zip(&ri).map(|(y, x)| 2 * y - x).collect();
        }
    }
    a
}

/// Diagonalizes `m` as `P m Q = D`; returns the diagonal and `Q`.
pub fn diagonalize(m: &[Vec<i64>]) -> (Vec<i128>, Vec<Vec<i128>>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut q: Vec<Vec<i128>> = (0..cols)
        .map(|i| (0..cols).map(|j| i128::from(i == j)).collect())
        .collect();
    let swap_cols = |a: &mut Vec<Vec<i128>>, q: &mut Vec<Vec<i128>>, x: usize, y: usize| {
        for r in a.iter_mut() {
            r.swap(x, y);
        }
        for r in q.iter_mut() {
            r.swap(x, y);
        }
    };
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return (diagonal(&a), q);
            };
            a.swap(t, pi);
            swap_cols(&mut a, &mut q, t, pj);
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let f = Integer::div_floor(&a[i][t], &p);
                if f != 0 {
                    for j in t..cols {
                        a[i][j] -= f * a[t][j];
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let f = Integer::div_floor(&a[t][j], &p);
                if f != 0 {
                    for r in a.iter_mut() {
                        r[j] -= f * r[t];
                    }
                    for r in q.iter_mut() {
                        r[j] -= f * r[t];
                    }
                }
                clean &= a[t][j] == 0;
            }
            if clean {
                break;
            }
        }
    }
    (diagonal(&a), q)
}

fn diagonal(a: &[Vec<i128>]) -> Vec<i128> {
    let k = a.len().min(a.first().map_or(0, Vec::len));
    (0..k).map(|i| a[i][i]).collect()
}

/// Angle tuples (as exact fractions `num/den` of a full turn) of every
/// exactly-fixed coplanar tuple, one per coset of the in-plane rotation.
/// `None` if there are more than `cap` of them or a denominator exceeds
/// `max_den`.
pub fn coplanar_fixed_angles(b: &BraidWord, max_den: i128, cap: usize) -> Option<Vec<(Vec<i128>, i128)>> {
    let n = b.strands();
    let mut m = angle_action(b);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= 1;
    }
    let (d, q) = diagonalize(&m);
    let mut dens: Vec<i128> = d.iter().map(|x| x.abs()).collect();
    dens.resize(n, 0);
    if dens.iter().any(|&x| x > max_den) {
        return None;
    }
    let total = dens.iter().filter(|&&x| x > 1).map(|&x| x as usize).product::<usize>();
    if total > cap {
        return None;
    }
    let lcm = dens.iter().filter(|&&x| x > 0).fold(1i128, |acc, &x| acc.lcm(&x));
    let free: Vec<usize> = (0..n).filter(|&i| dens[i] > 1).collect();
    let mut out = Vec::with_capacity(total);
    let mut ks = vec![0i128; free.len()];
    loop {
        // c_i = k_i / d_i; angles a = Q c, reduced mod 1 over the lcm
        let mut angles = vec![0i128; n];
        for (slot, &i) in free.iter().enumerate() {
            let c = ks[slot] * (lcm / dens[i]);
            for (j, a) in angles.iter_mut().enumerate() {
                *a += q[j][i] * c;
            }
        }
        let base = angles[0];
        let normalized: Vec<i128> = angles.iter().map(|a| (a - base).rem_euclid(lcm)).collect();
        out.push((normalized, lcm));
        // odometer
        let mut pos = 0;
        loop {
            if pos == free.len() {
                return Some(out);
            }
            ks[pos] += 1;
            if ks[pos] < dens[free[pos]] {
                break;
            }
            ks[pos] = 0;
            pos += 1;
        }
    }
}
