//! Evaluation of one polynomial at many points with a subproduct tree.

use crate::field::{Fe, FieldCtx};
use crate::meter::SpaceMeter;
use crate::poly::dense::{horner, mul_slices, rem_monic, DensePoly};

/// Below this many points a block is evaluated directly by Horner's rule.
const LEAF_POINTS: usize = 16;

/// Evaluates `f` at every point. The subproduct tree over the points is built
/// bottom-up, then `f` is reduced down the tree; leaves of up to
/// `LEAF_POINTS` points finish with Horner's rule.
pub fn multipoint_eval(f: &DensePoly, points: &[Fe], meter: &SpaceMeter) -> Vec<Fe> {
    let ctx = f.ctx;
    if points.is_empty() {
        return Vec::new();
    }
    let blocks: Vec<&[Fe]> = points.chunks(LEAF_POINTS).collect();
    let mut levels: Vec<Vec<Vec<Fe>>> = vec![blocks.iter().map(|b| from_roots(&ctx, b)).collect()];
    while levels.last().unwrap().len() > 1 {
        let prev = levels.last().unwrap();
        let next: Vec<Vec<Fe>> = prev
            .chunks(2)
            .map(|pair| if pair.len() == 2 { mul_slices(&ctx, &pair[0], &pair[1]) } else { pair[0].clone() })
            .collect();
        levels.push(next);
    }
    let tree_words: u64 = levels.iter().flatten().map(|p| p.len() as u64).sum();
    let _tree = meter.guard(tree_words);

    let n = f.degree().map_or(0, |d| d + 1);
    let top = levels.len() - 1;
    let root_rem = rem_monic(&ctx, &f.coeffs[..n], &levels[top][0]);
    let mut out = Vec::with_capacity(points.len());
    descend(&ctx, &levels, top, 0, root_rem, &blocks, &mut out, meter);
    out
}

#[allow(clippy::too_many_arguments)]
fn descend(
    ctx: &FieldCtx,
    levels: &[Vec<Vec<Fe>>],
    level: usize,
    idx: usize,
    rem: Vec<Fe>,
    blocks: &[&[Fe]],
    out: &mut Vec<Fe>,
    meter: &SpaceMeter,
) {
    let _g = meter.guard(rem.len() as u64);
    if level == 0 {
        out.extend(blocks[idx].iter().map(|&x| horner(ctx, &rem, x)));
        return;
    }
    for child in [2 * idx, 2 * idx + 1] {
        if let Some(m) = levels[level - 1].get(child) {
            let r = rem_monic(ctx, &rem, m);
            descend(ctx, levels, level - 1, child, r, blocks, out, meter);
        }
    }
}

/// `prod (x - b)` over the given roots, monic.
pub fn from_roots(ctx: &FieldCtx, roots: &[Fe]) -> Vec<Fe> {
    let mut p = vec![Fe::ONE];
    for &b in roots {
        let nb = ctx.neg(b);
        p.push(Fe::ZERO);
        for i in (0..p.len()).rev() {
            let shifted = if i > 0 { p[i - 1] } else { Fe::ZERO };
            p[i] = ctx.add(shifted, ctx.mul(p[i], nb));
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn example() {
        let f7 = make_field(7, 1).unwrap();
        let f = DensePoly::from_u64s(f7, &[1, 0, 1]);
        let pts: Vec<Fe> = [1, 2, 3].iter().map(|&v| Fe::scalar(v)).collect();
        let m = SpaceMeter::new();
        assert_eq!(multipoint_eval(&f, &pts, &m), vec![Fe::scalar(2), Fe::scalar(5), Fe::scalar(3)]);
    }

    #[test]
    fn matches_horner_on_whole_group() {
        let mut f = make_field(257, 1).unwrap();
        let pts: Vec<Fe> = f.units_by_generator().collect();
        let poly = DensePoly::new(f, (0..300u64).map(|i| f.from_u64(i * i + 7)).collect());
        let m = SpaceMeter::new();
        let got = multipoint_eval(&poly, &pts, &m);
        for (x, y) in pts.iter().zip(&got) {
            assert_eq!(poly.eval(*x), *y);
        }
        assert!(m.peak() > 0);
        assert_eq!(m.current(), 0);
    }
}
