/* Minimal C client: prints Phi_15, the block gap of Phi_{105*107} and the
 * check results for (15, 53). Exits nonzero on any unexpected result. */
#include <stdio.h>
#include "cyclogap.h"

int main(void) {
    cg_poly *phi = NULL;
    char *text = NULL;
    if (cg_phi(15, &phi) != CG_STATUS_OK || cg_poly_to_string(phi, &text) != CG_STATUS_OK) {
        fprintf(stderr, "phi failed: %s\n", cg_last_error());
        return 1;
    }
    printf("Phi_15 = %s\n", text);
    cg_string_free(text);
    cg_poly_free(phi);

    size_t gap = 0;
    if (cg_max_gap_via_blocks(105, 107, &gap) != CG_STATUS_OK || gap != 48) {
        return 1;
    }
    printf("g(Phi_11235) = %zu\n", gap);

    cg_verification *v = NULL;
    if (cg_verify_instance(15, 53, &v) != CG_STATUS_OK) {
        return 1;
    }
    for (size_t k = 0; k < cg_check_count(); k++) {
        int passed = 0;
        cg_verification_check(v, k, &passed);
        printf("%s %s\n", cg_check_name(k), passed ? "ok" : "FAIL");
    }
    int ok = cg_verification_all_passed(v);
    cg_verification_free(v);

    if (cg_verify_instance(9, 11, &v) != CG_STATUS_NOT_SQUAREFREE) {
        return 1;
    }
    printf("error: %s\n", cg_last_error());
    return ok ? 0 : 1;
}
