use clap::Parser;

fn main() {
    // Usage errors exit 2 via clap; help and version exit 0.
    let cli = calderon::cli::Cli::parse();
    let mut out = std::io::stdout().lock();
    match calderon::cli::run(cli, &mut out) {
        Ok(code) => std::process::exit(code),
        // A closed pipe (e.g. `calderon theta ... | head`) is not an error.
        Err(calderon::Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(2);
        }
    }
}
