use std::io::IsTerminal;

fn main() {
    let color = std::io::stdout().is_terminal() && std::env::var("LEGCH_COLOR").map_or(true, |v| v != "0");
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = legch::cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock(), color);
    std::process::exit(code);
}
