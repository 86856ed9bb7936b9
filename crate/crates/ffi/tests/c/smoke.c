#include <stdio.h>
#include <string.h>

#include "lelm_lab.h"

#define CHECK(expr)                                                        \
    do {                                                                   \
        LelmStatus s_ = (expr);                                            \
        if (s_ != LELM_STATUS_OK) {                                        \
            const char *m_ = lelm_last_error_message();                    \
            fprintf(stderr, "%s failed: %s\n", #expr, m_ ? m_ : "?");      \
            return 1;                                                      \
        }                                                                  \
    } while (0)

int main(void) {
    LelmApparatus *h = NULL;
    LelmPartition *p = NULL;
    char name[64];

    for (size_t n = 1; n <= 3; n++) {
        CHECK(lelm_apparatus_hadamard(n, &h));
        CHECK(lelm_partition_new(h, LELM_BOSON, 1e-9, &p));
        size_t count = lelm_partition_class_count(p);
        printf("n=%zu hadamard classes=%zu\n", n, count);
        if (count != (((size_t)1) << (n + 1)) - 1) {
            return 2;
        }
        lelm_partition_free(p);
        lelm_apparatus_free(h);
    }

    CHECK(lelm_apparatus_uopt_n1(&h));
    CHECK(lelm_partition_new(h, LELM_BOSON, 1e-9, &p));
    size_t c0 = 0, c2 = 0;
    CHECK(lelm_partition_class_of(p, 0, &c0));
    CHECK(lelm_partition_class_of(p, 2, &c2));
    CHECK(lelm_label_name(1, 2, name, sizeof name));
    printf("uopt: phi+ class %zu, %s class %zu\n", c0, name, c2);
    if (c0 != c2 || strcmp(name, "psi+") != 0) {
        return 3;
    }
    lelm_partition_free(p);
    lelm_apparatus_free(h);

    if (lelm_apparatus_hadamard(0, &h) != LELM_STATUS_INVALID_ARGUMENT) {
        return 4;
    }
    printf("error path: %s\n", lelm_last_error_message());
    return 0;
}
