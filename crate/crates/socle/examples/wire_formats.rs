//! The JSON wire formats: elements and preserver forms, round-tripped
//! bit for bit, plus the shapes the parsers reject.

use socle::algebra::{BlockAlgebra, Tolerances};
use socle::json::{element_from_str, element_to_string, form_from_str, form_to_string};
use socle::preserver::random_form;
use socle::random;

fn main() {
    let alg = BlockAlgebra::new(vec![1, 2]).unwrap();
    let tol = Tolerances::default();

    let x = random::random_element(&alg, 3);
    let wire = element_to_string(&x);
    println!("element on the wire:\n{wire}\n");

    let back = element_from_str(&wire).unwrap();
    println!("roundtrip distance: {:?} (bitwise)", x.distance(&back));
    assert_eq!(x.distance(&back), 0.0);

    // The schema field is optional on input; dimensions must match.
    let bare = r#"{"block_dims":[1,2],"blocks":[[[[1,0]]],[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#;
    println!("bare element accepted: {}", element_from_str(bare).is_ok());

    for (what, bad) in [
        ("row length off", r#"{"block_dims":[2],"blocks":[[[[1,0]],[[0,0],[1,0]]]]}"#),
        ("block count off", r#"{"block_dims":[2,2],"blocks":[[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#),
        ("future schema", r#"{"schema":9,"block_dims":[1],"blocks":[[[[1,0]]]]}"#),
    ] {
        println!("{what}: {}", element_from_str(bad).unwrap_err());
    }
    println!();

    let form = random_form(&alg, 11, &tol).unwrap();
    let wire = form_to_string(&form);
    println!("form on the wire ({} bytes)", wire.len());
    let back = form_from_str(&wire, &tol).unwrap();
    assert!(back.matches(&form, 1e-12, 1e-12));
    println!("form roundtrip: perm {:?}, flags {:?} preserved", back.block_perm(), back.flags());
}
