#!/usr/bin/env node
/**
 * godsplit-extract <rootDir> [--out model.json] [--exclude GLOB]...
 *                  [--keep-accessors] [--keep-constructors] [--libraries]
 *
 * Emits a godsplit code-model JSON file for a TypeScript source tree and
 * prints a one-line summary (entities, edges, dropped calls).
 */

import * as fs from "node:fs";
import * as path from "node:path";
import { parseArgs } from "node:util";

import { extract, renderModel } from "./extract.js";

function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        out: { type: "string", default: "model.json" },
        exclude: { type: "string", multiple: true, default: [] },
        "keep-accessors": { type: "boolean", default: false },
        "keep-constructors": { type: "boolean", default: false },
        libraries: { type: "boolean", default: false },
        help: { type: "boolean", default: false },
      },
    });
  } catch (err) {
    console.error(`usage error: ${(err as Error).message}`);
    return 2;
  }
  const { values, positionals } = parsed;
  if (values.help || positionals.length !== 1) {
    console.error(
      "usage: godsplit-extract <rootDir> [--out model.json] [--exclude GLOB]... " +
        "[--keep-accessors] [--keep-constructors] [--libraries]",
    );
    return values.help ? 0 : 2;
  }

  let result;
  try {
    result = extract({
      rootDir: positionals[0],
      excludeGlobs: values.exclude as string[],
      skipAccessors: !values["keep-accessors"],
      skipConstructors: !values["keep-constructors"],
      emitLibraries: values.libraries as boolean,
    });
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }

  const outPath = values.out as string;
  try {
    fs.mkdirSync(path.dirname(path.resolve(outPath)), { recursive: true });
    fs.writeFileSync(outPath, renderModel(result.model), "utf-8");
  } catch (err) {
    console.error(`i/o error: ${(err as Error).message}`);
    return 3;
  }

  const s = result.summary;
  console.log(
    `wrote ${outPath}: ${s.entities} entities, ${s.relationships} relationships, ` +
      `${s.calls} calls (${s.droppedCalls} dropped) from ${s.files} file(s)` +
      (s.skippedFiles.length ? `, ${s.skippedFiles.length} skipped` : ""),
  );
  return 0;
}

process.exit(main(process.argv.slice(2)));
