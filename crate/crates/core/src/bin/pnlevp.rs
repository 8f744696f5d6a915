use clap::Parser;

fn main() {
    let cli = pnlevp::cli::Cli::parse();
    let code = pnlevp::cli::run(&cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
