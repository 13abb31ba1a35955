use num_bigint::BigInt;
use num_integer::Integer;

use super::{ConicBundleSurface, MultiPoly};
use crate::arith::saturated_frame;
use crate::projgeo::ProjPoint;
use crate::Error;

/// Blows up a cubic hypersurface in ℙⁿ⁺² along a line it contains.
///
/// The line through `p` and `q` is moved to z₂ = ⋯ = z_{n+2} = 0 by an integral
/// unimodular change of coordinates; then (z₀, …, z_{n+2}) = (x₀, x₁, y₀x₂, …, yₙx₂)
/// and division by x₂ leaves a surface of bidegree (1, 2) in 𝔽ₙ(0,0,1).
/// If the resulting quadratic form has an odd cross coefficient the whole form is
/// doubled so the Gram matrix stays integral.
pub fn import_cubic_with_line(cubic: &MultiPoly, p: &ProjPoint, q: &ProjPoint) -> Result<ConicBundleSurface, Error> {
    let nv = cubic.nvars();
    if nv < 4 {
        return Err(Error::InvalidInput(format!(
            "a cubic with a line needs at least 4 variables, got {nv}"
        )));
    }
    if cubic.degree() != 3 {
        return Err(Error::InvalidInput(format!(
            "expected a cubic form, got degree {}",
            cubic.degree()
        )));
    }
    if p.coords().len() != nv || q.coords().len() != nv {
        return Err(Error::InvalidInput(
            "line points must live in the cubic's projective space".into(),
        ));
    }
    let frame = saturated_frame(&[p.coords().to_vec(), q.coords().to_vec()])
        .ok_or_else(|| Error::Rank("the two points do not span a line".into()))?;

    // z_k = Σ_l frame[l][k]·z'_l
    let linear: Vec<MultiPoly> = (0..nv)
        .map(|k| {
            let terms = (0..nv).map(|l| {
                let mut e = vec![0u32; nv];
                e[l] = 1;
                (frame[l][k].clone(), e)
            });
            MultiPoly::from_terms(nv, 1, terms).expect("linear form")
        })
        .collect();
    let mut moved = MultiPoly::zero(nv, 3);
    for (e, c) in cubic.terms() {
        let mut t = MultiPoly::constant(nv, c.clone());
        for (k, &d) in e.iter().enumerate() {
            for _ in 0..d {
                t = t.mul(&linear[k]);
            }
        }
        moved = moved.add(&t);
    }

    let on_line: Vec<String> = moved
        .terms()
        .filter(|(e, _)| e[2..].iter().all(|&d| d == 0))
        .map(|(e, c)| format!("{c}·z'^{e:?}"))
        .collect();
    if !on_line.is_empty() {
        return Err(Error::Containment(format!(
            "restriction to the line is nonzero: {}",
            on_line.join(" + ")
        )));
    }

    // collect q_ab(y): x0^k0 x1^k1 x2^(m-1) · y^(rest), m = total y-degree
    let n = nv - 3;
    let mut q_ab: [[MultiPoly; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| MultiPoly::zero(n + 1, (i == 2) as u32 + (j == 2) as u32 + 1)));
    for (e, c) in moved.terms() {
        let ydeg: u32 = e[2..].iter().sum();
        let yexp = e[2..].to_vec();
        let mono = MultiPoly::monomial(c.clone(), yexp);
        let mut xs = Vec::new();
        xs.extend(std::iter::repeat_n(0usize, e[0] as usize));
        xs.extend(std::iter::repeat_n(1usize, e[1] as usize));
        xs.extend(std::iter::repeat_n(2usize, (ydeg - 1) as usize));
        let (i, j) = (xs[0], xs[1]);
        q_ab[i][j] = q_ab[i][j].add(&mono);
    }

    let odd_cross = (0..3).any(|i| ((i + 1)..3).any(|j| q_ab[i][j].terms().any(|(_, c)| c.is_odd())));
    let two = BigInt::from(2);
    let gram: [[MultiPoly; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let (lo, hi) = (i.min(j), i.max(j));
            let f = &q_ab[lo][hi];
            match (lo == hi, odd_cross) {
                (true, true) => f.scale(&two),
                (true, false) => f.clone(),
                (false, true) => f.clone(),
                (false, false) => {
                    let halved = f.terms().map(|(e, c)| (c / &two, e.clone()));
                    MultiPoly::from_terms(f.nvars(), f.degree(), halved).expect("same shape")
                }
            }
        })
    });
    ConicBundleSurface::new(n, [0, 0, 1], 1, gram)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::samples::cubic_surface;

    fn cubic(terms: &[(i64, [u32; 4])]) -> MultiPoly {
        MultiPoly::from_terms(4, 3, terms.iter().map(|(c, e)| (BigInt::from(*c), e.to_vec()))).unwrap()
    }

    fn pt(c: &[i64]) -> ProjPoint {
        ProjPoint::from_i64s(c).unwrap()
    }

    #[test]
    fn fixture_cubic_imports_to_known_surface() {
        let c = cubic(&[
            (1, [2, 0, 1, 0]),
            (1, [0, 2, 0, 1]),
            (1, [0, 0, 3, 0]),
            (1, [0, 0, 0, 3]),
        ]);
        let s = import_cubic_with_line(&c, &pt(&[1, 0, 0, 0]), &pt(&[0, 1, 0, 0])).unwrap();
        assert_eq!(s, cubic_surface());
        assert!(s.validate().passed());
    }

    #[test]
    fn line_not_on_cubic() {
        let c = cubic(&[
            (1, [3, 0, 0, 0]),
            (1, [0, 0, 3, 0]),
            (1, [0, 0, 0, 3]),
            (1, [0, 3, 0, 0]),
        ]);
        let err = import_cubic_with_line(&c, &pt(&[1, 0, 0, 0]), &pt(&[0, 1, 0, 0])).unwrap_err();
        assert!(matches!(err, Error::Containment(_)));
    }

    #[test]
    fn coincident_points_have_rank_one() {
        let c = cubic(&[
            (1, [2, 0, 1, 0]),
            (1, [0, 2, 0, 1]),
            (1, [0, 0, 3, 0]),
            (1, [0, 0, 0, 3]),
        ]);
        let err = import_cubic_with_line(&c, &pt(&[1, 0, 0, 0]), &pt(&[1, 0, 0, 0])).unwrap_err();
        assert!(matches!(err, Error::Rank(_)));
    }

    #[test]
    fn moved_line_still_gives_bidegree_one_two() {
        // the Fermat-type cubic z0³ + z1³ + z2³ + z3³ contains the line z0 = -z1, z2 = -z3
        let c = cubic(&[
            (1, [3, 0, 0, 0]),
            (1, [0, 3, 0, 0]),
            (1, [0, 0, 3, 0]),
            (1, [0, 0, 0, 3]),
        ]);
        let s = import_cubic_with_line(&c, &pt(&[1, -1, 0, 0]), &pt(&[0, 0, 1, -1])).unwrap();
        assert_eq!(s.a(), [0, 0, 1]);
        assert_eq!(s.e(), 1);
        let r = s.validate();
        assert_eq!(
            r.check("degree-matrix").unwrap().status,
            crate::bundle::CheckStatus::Pass
        );
        assert_eq!(
            r.check("discriminant-degree").unwrap().status,
            crate::bundle::CheckStatus::Pass
        );
    }
}
