use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::network::Network;

/// Random valid feed-forward network with at most `max_elements` elements
/// (phase plates included). `uniform` must yield samples in `[0, 1)`.
///
/// Splitter magnitudes are drawn from `[0.05, 0.95]` so no coupling vanishes.
/// One open segment becomes the detector, the rest are dumps.
pub fn random_network(uniform: &mut dyn FnMut() -> f64, max_elements: usize) -> Network {
    let mut pick = |n: usize| ((uniform() * n as f64) as usize).min(n.saturating_sub(1));
    let mut b = Network::builder();
    b.source("s0");
    let mut open: Vec<String> = alloc::vec![String::from("s0")];
    let mut fresh = 0usize;
    let mut next = |prefix: &str| {
        fresh += 1;
        format!("{prefix}{fresh}")
    };
    let count = 1 + pick(max_elements.max(1));
    for _ in 0..count {
        let choice = pick(4);
        match choice {
            0 | 1 => {
                let two = choice == 1 && open.len() >= 2;
                let first = open.remove(pick(open.len()));
                let mut ins = alloc::vec![first];
                if two {
                    ins.push(open.remove(pick(open.len())));
                }
                let (o1, o2) = (next("s"), next("s"));
                let t = 0.05 + 0.9 * pick(10_000) as f64 / 10_000.0;
                let refs: Vec<&str> = ins.iter().map(String::as_str).collect();
                b.splitter(&next("BS"), &refs, &o1, &o2, t);
                open.push(o1);
                open.push(o2);
            }
            2 => {
                let input = open.remove(pick(open.len()));
                let out = next("s");
                let z = pick(2001) as f64 - 1000.0;
                b.mirror(&next("M"), &input, &out, z);
                open.push(out);
            }
            _ => {
                let seg = open[pick(open.len())].clone();
                let phi = 2.0 * PI * pick(10_000) as f64 / 10_000.0;
                b.phase(&next("P"), &seg, phi);
            }
        }
    }
    let det = open.remove(pick(open.len()));
    b.detector(&det);
    for d in &open {
        b.dump(d);
    }
    b.build().expect("generator only emits valid networks")
}
