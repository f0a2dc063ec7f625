fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(semigroup_lab_cli::run(&argv));
}
