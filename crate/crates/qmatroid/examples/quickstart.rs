//! The README walkthrough, runnable: `cargo run --example quickstart`
//! (from the workspace root, so the fixture path resolves).

use qmatroid::dsum::SumStrategy;
use qmatroid::spec::MatroidSpec;
use qmatroid::{Budget, Subspace};

fn main() -> Result<(), qmatroid::Error> {
    let spec = MatroidSpec::load("fixtures/rep_f8_n4.json".as_ref())?;
    let m = spec.build(SumStrategy::ZBased, &Budget::unlimited())?;

    let v = Subspace::span(2, 4, &[vec![1, 0, 1, 0]])?;
    assert_eq!(m.rank(&v)?, 1);
    // rank*(V^perp) = dim V^perp + rank(V) - rank(E) = 3 + 1 - 2
    assert_eq!(m.dual().rank(&v.orthogonal())?, 2);

    let fam = qmatroid::zflats::compute_zflats(&m, &Budget::unlimited())?;
    assert_eq!(fam.len(), 5);

    println!("rank(<(1,0,1,0)>) = {}", m.rank(&v)?);
    println!("cyclic flats: {}", fam.len());
    Ok(())
}
