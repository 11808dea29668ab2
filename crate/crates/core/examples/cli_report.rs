//! Drives the command-line front end in-process and prints its JSON report.

fn main() {
    let instance = concat!(env!("CARGO_MANIFEST_DIR"), "/instances/directed-hk-3.txt");
    let mut out = Vec::new();
    let code = ndgame::cli::run(["ndgame", "analyze", "--instance", instance], &mut out, &mut std::io::stderr());
    print!("{}", String::from_utf8_lossy(&out));
    println!("exit code {code}");
}
