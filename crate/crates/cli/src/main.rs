fn main() {
    let args: Vec<String> = std::env::args().collect();
    let code = cqed_cli::main_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr());
    std::process::exit(code);
}
