fn main() {
    std::process::exit(poincare_series::cli::run());
}
