fn main() {
    std::process::exit(metric_forge::run());
}
