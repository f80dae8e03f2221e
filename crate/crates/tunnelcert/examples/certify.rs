//! Certify every built-in fixture and print the verdicts, then replay one
//! certificate against its pattern.
//!
//! ```text
//! cargo run --example certify
//! ```

use tunnelcert::criteria::verify_certificate;
use tunnelcert::{certify, fixtures, CertifyOptions};

fn main() {
    let opts = CertifyOptions::default();
    for (name, p) in fixtures::all() {
        let cert = certify(&p, &opts).expect("certification runs");
        let rule = cert
            .rule
            .map(|r| format!("{r:?}"))
            .unwrap_or_else(|| "-".into());
        println!("{name:<24} {:?} {rule}", cert.verdict);
        verify_certificate(&cert, &p).expect("certificate replays");
    }

    let p = fixtures::five_bracelet(0.1, 0.2);
    let cert = certify(&p, &opts).unwrap();
    println!("\n{}", cert.to_json());
}
