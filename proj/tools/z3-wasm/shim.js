#!/usr/bin/env node
// SMT-LIB front door for the WebAssembly build of Z3. Reads one whole
// SMT-LIB2 script from stdin, evaluates it, prints the solver output.
// Usable wherever a `z3 -in`-style one-shot solver process is expected:
//   node shim.js < query.smt2
const { init } = require('z3-solver');

async function main() {
  const { Z3 } = await init();
  const cfg = Z3.mk_config();
  const ctx = Z3.mk_context(cfg);
  const chunks = [];
  process.stdin.on('data', (c) => chunks.push(c));
  process.stdin.on('end', async () => {
    const input = Buffer.concat(chunks).toString('utf8');
    try {
      const out = await Z3.eval_smtlib2_string(ctx, input);
      process.stdout.write(out.endsWith('\n') || out === '' ? out : out + '\n');
      process.exit(0);
    } catch (e) {
      process.stderr.write(String(e) + '\n');
      process.exit(1);
    }
  });
}

main().catch((e) => {
  process.stderr.write(String(e) + '\n');
  process.exit(1);
});
