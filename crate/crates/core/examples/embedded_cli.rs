//! Driving the command-line front end from Rust: the same entry point the
//! binary uses, with output captured in memory.
//!
//! cargo run --release --example embedded_cli

use hypoheat::cli::run_cli;

fn run(args: &[&str]) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_cli(
        std::iter::once("hypoheat").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    println!("$ hypoheat {}  -> exit {code}", args.join(" "));
    print!(
        "{}{}",
        String::from_utf8_lossy(&out),
        String::from_utf8_lossy(&err)
    );
    println!();
}

fn main() {
    run(&[
        "eval",
        "--group",
        "so3",
        "--point",
        "0.2,0.1,-0.3",
        "--time",
        "0.5",
    ]);
    run(&[
        "grid", "--group", "h2", "--time", "0.5,1", "--point", "0,0,0", "--range", "z:0:1:3",
    ]);
    let frame = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/martinet.frame");
    run(&["popp", "--frame-file", frame]);
    run(&["eval", "--group", "h2", "--time", "0"]);
}
