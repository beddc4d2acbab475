#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "splashwave/threading.hpp"

int main(int argc, char** argv) {
    splashwave::configure_threads_from_env();
    doctest::Context context(argc, argv);
    return context.run();
}
