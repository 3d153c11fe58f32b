fn main() {
    lana_cli::run(lana_cli::lana_main)
}
