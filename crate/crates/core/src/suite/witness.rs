use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{Scalar, Vector};
use crate::io::{BodiesFile, BodiesFileJson, BodyJson};

/// Greedy shrink of a failing instance. `still_fails` must hold for the
/// input; the result is a file on which it still holds, with as many
/// generators/vertices dropped as possible and each integer coordinate
/// and integer generator weight reduced to the smallest magnitude found by
/// bisection.
pub fn minimize_witness(file: &BodiesFile, still_fails: impl Fn(&BodiesFile) -> bool) -> BodiesFile {
    let mut best = file.to_json();
    let accept = |cand: &BodiesFileJson| BodiesFile::from_json(cand.clone()).ok().filter(|f| still_fails(f)).is_some();

    let names: Vec<String> = best.bodies.keys().cloned().collect();
    for name in &names {
        let mut i = 0;
        while i < item_count(&best.bodies[name]) {
            let mut cand = best.clone();
            remove_item(cand.bodies.get_mut(name).expect("known body"), i);
            if accept(&cand) {
                best = cand;
            } else {
                i += 1;
            }
        }
    }

    for name in &names {
        for i in 0..item_count(&best.bodies[name]) {
            for j in 0..best.dim {
                let Some(c) = coordinate(&best.bodies[name], i, j).and_then(|c| int_value(&c)) else {
                    continue;
                };
                let sign = if c.is_negative() { -1 } else { 1 };
                let Some(top) = c.abs().to_i64() else { continue };
                let (mut lo, mut hi) = (0i64, top);
                while lo < hi {
                    let mid = lo + (hi - lo) / 2;
                    let mut cand = best.clone();
                    set_coordinate(cand.bodies.get_mut(name).expect("known body"), i, j, Scalar::int(sign * mid));
                    if accept(&cand) {
                        hi = mid;
                    } else {
                        lo = mid + 1;
                    }
                }
                set_coordinate(best.bodies.get_mut(name).expect("known body"), i, j, Scalar::int(sign * hi));
            }
        }
    }
    for name in &names {
        let BodyJson::Zonotope { generators } = &best.bodies[name] else { continue };
        for i in 0..generators.len() {
            let BodyJson::Zonotope { generators } = &best.bodies[name] else { unreachable!() };
            let Some(top) = int_value(&generators[i].lambda).and_then(|v| v.to_i64()) else { continue };
            let (mut lo, mut hi) = (1i64, top);
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                let mut cand = best.clone();
                set_lambda(cand.bodies.get_mut(name).expect("known body"), i, Scalar::int(mid));
                if accept(&cand) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            set_lambda(best.bodies.get_mut(name).expect("known body"), i, Scalar::int(hi));
        }
    }
    BodiesFile::from_json(best).expect("accepted candidates parse")
}

fn item_count(b: &BodyJson) -> usize {
    match b {
        BodyJson::Zonotope { generators } => generators.len(),
        BodyJson::Polytope { vertices } => vertices.len(),
        BodyJson::Smooth { .. } => 0,
    }
}

fn remove_item(b: &mut BodyJson, i: usize) {
    match b {
        BodyJson::Zonotope { generators } => {
            generators.remove(i);
        }
        BodyJson::Polytope { vertices } => {
            vertices.remove(i);
        }
        BodyJson::Smooth { .. } => {}
    }
}

fn item(b: &BodyJson, i: usize) -> Option<&Vector> {
    match b {
        BodyJson::Zonotope { generators } => generators.get(i).map(|g| &g.u),
        BodyJson::Polytope { vertices } => vertices.get(i),
        BodyJson::Smooth { .. } => None,
    }
}

fn coordinate(b: &BodyJson, i: usize, j: usize) -> Option<Scalar> {
    item(b, i).and_then(|v| v.iter().nth(j).cloned())
}

fn set_coordinate(b: &mut BodyJson, i: usize, j: usize, value: Scalar) {
    let v = match b {
        BodyJson::Zonotope { generators } => &mut generators[i].u,
        BodyJson::Polytope { vertices } => &mut vertices[i],
        BodyJson::Smooth { .. } => return,
    };
    let mut coords: Vec<Scalar> = v.iter().cloned().collect();
    coords[j] = value;
    *v = Vector::new(coords);
}

fn set_lambda(b: &mut BodyJson, i: usize, value: Scalar) {
    if let BodyJson::Zonotope { generators } = b {
        generators[i].lambda = value;
    }
}

fn int_value(s: &Scalar) -> Option<BigInt> {
    let r = s.as_rational()?;
    (r.is_integer() && !r.is_zero()).then(|| r.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{Body, Zonotope};
    use crate::io::TaskJson;

    #[test]
    fn shrinks_to_the_failing_core() {
        let one = Scalar::one();
        let k = Zonotope::from_int_generators(
            2,
            &[(&[9, 0], one.clone()), (&[0, 7], one.clone()), (&[3, 4], one.clone())],
        )
        .unwrap();
        let task = TaskJson { k: "K".into(), l: Some("K".into()), ..Default::default() };
        let mut bodies = std::collections::BTreeMap::new();
        bodies.insert("K".to_string(), Body::Zonotope(k));
        let file = BodiesFile { dim: 2, bodies, task };
        // "fails" while some segment reaches x >= 5
        let fails = |f: &BodiesFile| {
            f.k_zonotope().unwrap().generators().iter().any(|g| g.endpoint()[0].abs() >= Scalar::int(5))
        };
        let small = minimize_witness(&file, fails);
        let gens = small.k_zonotope().unwrap().generators();
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].endpoint(), Vector::from_ints(&[5, 0]));
    }
}
