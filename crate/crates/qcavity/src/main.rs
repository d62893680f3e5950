fn main() {
    std::process::exit(qcavity::cli::run());
}
