// Loads a form from JSON and runs both identities with the shipped conventions.

#include <hecke/hecke.hpp>

#include <cstdio>
#include <iostream>

int main(int argc, char** argv)
{
    using namespace hecke;
    const std::string path = argc > 1 ? argv[1] : HECKE_SAMPLES_DIR "/forms/e2.json";
    try {
        const auto form = load_form_file(path);
        const auto one = verify_identity_one(form, 10.5, 2, 100000, 1e-5, confirmed_ledger(identity_kind::one));
        const auto two = verify_identity_two(form, 3, 2, 10000, 1e-8, confirmed_ledger(identity_kind::two));
        sweep_summary s = summarize({one, two});
        std::cout << to_table(s);
        return s.all_passed ? 0 : 1;
    } catch (const error& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
}
