//! Binary entry point: parse, dispatch, and map every outcome — including
//! panics — to the documented exit codes.

fn main() {
    let code = std::panic::catch_unwind(qriccati_cli::run).unwrap_or_else(|_| {
        eprintln!("error: internal: unexpected panic");
        4
    });
    std::process::exit(code);
}
