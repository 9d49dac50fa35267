use cknlab::domain::{classify_regime, CknParams, RadialProfile};
use cknlab::identities::verify_2ckn_remainder;
use cknlab::quad::QuadOpts;

fn main() {
    let params = CknParams::new(3, 2.0, -1.0, 0.0).unwrap();
    let regime = classify_regime(&params);
    let f = RadialProfile::perturbed_extremizer(&params, 1.0, 0.3, 1.5, 3.0).unwrap();
    let rep = verify_2ckn_remainder(&params, &regime, &f, QuadOpts::default(), 1e-8).unwrap();
    println!("verify: lhs {:.16e} rhs {:.16e} diff {:.3e}", rep.lhs, rep.rhs, rep.lhs - rep.rhs);
}
