use latsum::fixtures::{check_entry, manifest};
use latsum::genfun::Options;

fn main() {
    for e in manifest() {
        match check_entry(&e, &Options::default()) {
            Ok(out) => println!("{:<24} {:>8.2}s {}", out.id, out.seconds, if out.pass { "ok" } else { "FAIL" }),
            Err(err) => println!("{:<24} error: {err}", e.id),
        }
    }
}
