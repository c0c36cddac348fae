# reports/rendering.py
"""Human-readable text, rendered from the JSON report and nothing else."""


def _measure(weights):
    return ' + '.join(f"{q} {x}" for x, q in weights.items()) or '0'


def _check_line(check):
    if not check['passed']:
        mark = 'FAIL' if check['gating'] else 'warn'
    else:
        mark = 'ok'
    parts = [f"  [{mark}] {check['name']}"]
    if check['kind'] == 'statistical' and check['dof'] is not None:
        parts.append(f"chi2 = {check['statistic']:.4g} (threshold {check['threshold']:.4g}, "
                     f"dof {check['dof']}, p = {check['p_value']:.4g})")
    if check['note']:
        parts.append(check['note'])
    return '  '.join(parts)


def render_verification(section):
    status = 'passed' if section['passed'] else 'FAILED'
    lines = [f"{section['name']}: {status}"]
    lines.extend(_check_line(check) for check in section['checks'])
    Te = section.get('Te')
    if Te:
        tail = ', '.join(f"P(>{t}) = {s:.3g}" for t, s in Te['tail'][:8])
        lines.append(f"  T^e: witness {' '.join(Te['word'])}, seen on {Te['observed']} paths; {tail}")
    if 'lambda' in section:
        lines.append(f"  lambda = ({', '.join(section['lambda'])}), "
                     f"{'measurable' if section['measurable'] else 'not measurable'}")
    for row in section.get('joint_table', []):
        lines.append(f"  Y_C = {row['Y_C']}, Z_W = {row['Z_W']}: expected {row['expected']}, "
                     f"observed {row['observed']:.4f}")
    return lines


def render_text(report):
    law = report['input']
    sg = report['semigroup']
    rees = report['rees']
    limits = report['limits']
    cliques = report['cliques']
    invariant = report['invariant_law']

    lines = [f"mapevo {report['version']} {report['command']}"
             + (f" (seed {report['seed']})" if report['seed'] is not None else '')]
    if 'generated_at' in report:
        lines.append(f"generated at {report['generated_at']}")
    lines.append('')
    lines.append(f"law on {law['n']} points" + (f" from {law['source']}" if law['source'] else ''))
    for f, w in zip(law['generators'], law['weights']):
        lines.append(f"  {w}  [{','.join(str(y) for y in f)}]")

    lines += ['', 'semigroup',
              f"  |S| = {sg['size']}, |K| = {sg['kernel_size']}, m_mu = {sg['m_mu']}, "
              f"{sg['idempotents']} idempotents",
              f"  e = {rees['e']} = {' '.join(reversed(sg['word_for_e']))}"]

    lines += ['', 'Rees decomposition at e',
              f"  L = {{{', '.join(rees['L'])}}}",
              f"  |G| = {len(rees['G'])}, |H| = {len(rees['H'])}, p = {rees['p']}, gamma = {rees['gamma']}",
              f"  R = {{{', '.join(rees['R'])}}}",
              "  H = G" if rees['H_equals_G'] else f"  H is a proper subgroup of index {rees['p']}"]

    lines += ['', 'convolution limits',
              f"  eta^L = {_measure(limits['eta_L'])}",
              f"  eta^R = {_measure(limits['eta_R'])}",
              f"  eta = {_measure(limits['eta'])}"]
    if limits['eta_equals_nu']:
        lines.append("  eta = nu: mu^n converges")
    else:
        lines.append(f"  eta != nu: mu^n cycles with period {limits['p']}")
        lines.append(f"  nu = {_measure(limits['nu'])}")
    oracle = limits['oracle']
    if oracle:
        lines.append(f"  float oracle: p = {oracle['p_est']} after {oracle['iterations']} steps, "
                     f"|eta - oracle| = {oracle['eta_distance']:.2e}")
    cesaro = limits['cesaro']
    if cesaro:
        lines.append('  running average: ' + ', '.join(
            f"{d:.2e} at n = {n}" for n, d in zip(cesaro['steps'], cesaro['distance'])))

    lines += ['', 'F-cliques',
              f"  m_mu = {cliques['m_mu']}, |W_mu| = {cliques['W_mu_size']}, "
              f"{cliques['deadlocked_tuples_size']} deadlocked m_mu-tuples",
              '  cliques: ' + ', '.join('{' + ','.join(map(str, c)) + '}' for c in cliques['f_cliques']),
              '  W = {' + ', '.join('(' + ','.join(map(str, w)) + ')' for w in cliques['W']) + '}']
    for x, (l, a, w) in cliques['example_projections'].items():
        lines.append(f"  {x} = {l} {a} {w}")

    lines += ['', 'invariant law',
              f"  Lambda_W = {_measure(invariant['Lambda_W'])}",
              f"  lambda = ({', '.join(invariant['lambda'])})",
              '  P_mu =']
    lines.extend('    ' + '  '.join(f"{q:>5}" for q in row) for row in invariant['transition_matrix'])

    for section in report['verification']:
        lines.append('')
        lines.extend(render_verification(section))
    lines += ['', f"exit code {report['exit_code']}"]
    return '\n'.join(lines)
