//! Proves every built-in theorem, or only those named on the command line,
//! and replays each transcript.

use std::time::Instant;

use hyperwz::database::builtin;
use hyperwz::prover::{prove_and_extend, replay};

fn main() {
    let only: Vec<String> = std::env::args().skip(1).collect();
    for e in builtin() {
        if !only.is_empty() && !only.contains(&e.spec.name) {
            continue;
        }
        let t = Instant::now();
        let tr = prove_and_extend(&e.spec, e.shift.clone(), e.extensions.clone());
        println!("{tr}replay: {:?}  ({:?})\n", replay(&tr), t.elapsed());
    }
}
