/**
 * Walks a TypeScript source tree and emits a godsplit code-model document:
 * directories and modules become packages, class declarations become classes
 * (nesting preserved), function members become methods, `extends` clauses
 * become generalization edges, class-typed members become associations, and
 * call expressions that resolve to a method in the model become call edges.
 * Calls that cannot be resolved to a model method are dropped and counted.
 */

import * as fs from "node:fs";
import * as path from "node:path";
import ts from "typescript";

export interface ExtractionConfig {
  rootDir: string;
  excludeGlobs?: string[];
  /** Drop constructors (default true). */
  skipConstructors?: boolean;
  /** Drop get/set accessors and trivial getter/setter bodies (default true). */
  skipAccessors?: boolean;
  /** Emit library-kind entities for resolved declaration-file targets (default false). */
  emitLibraries?: boolean;
}

export interface EntityJson {
  id: string;
  kind: "package" | "class" | "method";
  name: string;
  parent?: string;
  library?: boolean;
}

export interface RelationshipJson {
  source: string;
  target: string;
  kind: "inner" | "generalization" | "aggregation" | "association" | "dependency";
}

export interface CallJson {
  caller: string;
  callee: string;
}

export interface CodeModelJson {
  entities: EntityJson[];
  relationships: RelationshipJson[];
  calls: CallJson[];
}

export interface ExtractionResult {
  model: CodeModelJson;
  summary: {
    files: number;
    skippedFiles: string[];
    entities: number;
    relationships: number;
    calls: number;
    droppedCalls: number;
  };
}

const SOURCE_EXTENSIONS = new Set([".ts", ".tsx", ".mts", ".cts"]);
const ROOT_ID = ".";
const LIB_ID = "lib";

/** Minimal glob support: `**` crosses directories, `*`/`?` stay inside one. */
export function globToRegExp(pattern: string): RegExp {
  let out = "^";
  for (let i = 0; i < pattern.length; i++) {
    const ch = pattern[i];
    if (ch === "*") {
      if (pattern[i + 1] === "*") {
        out += ".*";
        i++;
      } else {
        out += "[^/]*";
      }
    } else if (ch === "?") {
      out += "[^/]";
    } else {
      out += ch.replace(/[.+^${}()|[\]\\]/g, "\\$&");
    }
  }
  return new RegExp(out + "$");
}

function isExcluded(relPath: string, patterns: RegExp[]): boolean {
  const segments = relPath.split("/");
  return patterns.some(
    (re) => re.test(relPath) || segments.some((segment) => re.test(segment)),
  );
}

function listSourceFiles(rootDir: string, patterns: RegExp[]): string[] {
  const found: string[] = [];
  const walk = (dir: string) => {
    for (const entry of fs.readdirSync(dir, { withFileTypes: true }).sort((a, b) => a.name.localeCompare(b.name))) {
      if (entry.name === "node_modules" || entry.name.startsWith(".")) continue;
      const full = path.join(dir, entry.name);
      const rel = path.relative(rootDir, full).split(path.sep).join("/");
      if (isExcluded(rel, patterns)) continue;
      if (entry.isDirectory()) {
        walk(full);
      } else if (SOURCE_EXTENSIONS.has(path.extname(entry.name)) && !entry.name.endsWith(".d.ts")) {
        found.push(full);
      }
    }
  };
  walk(rootDir);
  return found.sort();
}

class ModelBuilder {
  entities: EntityJson[] = [];
  relationships: RelationshipJson[] = [];
  calls: CallJson[] = [];
  private ids = new Set<string>();
  private edgeKeys = new Set<string>();

  addEntity(entity: EntityJson): string {
    let id = entity.id;
    for (let n = 2; this.ids.has(id); n++) id = `${entity.id}~${n}`;
    this.ids.add(id);
    this.entities.push({ ...entity, id });
    return id;
  }

  has(id: string): boolean {
    return this.ids.has(id);
  }

  addRelationship(rel: RelationshipJson): void {
    if (rel.source === rel.target) return;
    const key = `${rel.kind}|${rel.source}|${rel.target}`;
    const mirror = `${rel.kind}|${rel.target}|${rel.source}`;
    if (this.edgeKeys.has(key) || (rel.kind !== "generalization" && this.edgeKeys.has(mirror))) return;
    this.edgeKeys.add(key);
    this.relationships.push(rel);
  }

  addCall(call: CallJson): void {
    const key = `call|${call.caller}|${call.callee}`;
    if (this.edgeKeys.has(key)) return;
    this.edgeKeys.add(key);
    this.calls.push(call);
  }
}

export function extract(config: ExtractionConfig): ExtractionResult {
  const rootDir = path.resolve(config.rootDir);
  if (!fs.existsSync(rootDir) || !fs.statSync(rootDir).isDirectory()) {
    throw new Error(`root directory not found: ${config.rootDir}`);
  }
  const skipConstructors = config.skipConstructors ?? true;
  const skipAccessors = config.skipAccessors ?? true;
  const emitLibraries = config.emitLibraries ?? false;
  const patterns = (config.excludeGlobs ?? []).map(globToRegExp);

  const files = listSourceFiles(rootDir, patterns);
  const program = ts.createProgram(files, {
    target: ts.ScriptTarget.ES2022,
    module: ts.ModuleKind.ESNext,
    moduleResolution: ts.ModuleResolutionKind.Bundler,
    allowJs: false,
  });
  const checker = program.getTypeChecker();

  const builder = new ModelBuilder();
  builder.addEntity({ id: ROOT_ID, kind: "package", name: path.basename(rootDir) });

  const packageIds = new Map<string, string>([["", ROOT_ID]]);
  const ensurePackage = (relDir: string): string => {
    const known = packageIds.get(relDir);
    if (known) return known;
    const parent = ensurePackage(path.posix.dirname(relDir) === "." ? "" : path.posix.dirname(relDir));
    const id = builder.addEntity({
      id: relDir,
      kind: "package",
      name: path.posix.basename(relDir),
      parent,
    });
    packageIds.set(relDir, id);
    return id;
  };

  // node -> model method id, for call-site resolution
  const methodIds = new Map<ts.Node, string>();
  const classIds = new Map<ts.Node, string>();
  const skippedFiles: string[] = [];
  // library-kind entities for declaration-file targets, built on demand
  const libraryIds = new Map<ts.Node, string>();
  let droppedCalls = 0;

  const sourceFiles = files
    .map((f) => program.getSourceFile(f))
    .filter((sf): sf is ts.SourceFile => sf !== undefined);

  const parsable = sourceFiles.filter((sf) => {
    if (program.getSyntacticDiagnostics(sf).length > 0) {
      const rel = path.relative(rootDir, sf.fileName).split(path.sep).join("/");
      skippedFiles.push(rel);
      console.error(`warning: skipping unparseable file ${rel}`);
      return false;
    }
    return true;
  });

  // pass 1: entities (packages, classes, methods)
  for (const sf of parsable) {
    const rel = path.relative(rootDir, sf.fileName).split(path.sep).join("/");
    const dir = path.posix.dirname(rel);
    const filePackage = builder.addEntity({
      id: rel,
      kind: "package",
      name: path.posix.basename(rel, path.extname(rel)),
      parent: ensurePackage(dir === "." ? "" : dir),
    });
    collectContainer(sf, filePackage);
  }

  function collectContainer(node: ts.Node, parentId: string): void {
    node.forEachChild((child) => {
      if (ts.isClassDeclaration(child)) {
        collectClass(child, parentId);
      } else if (ts.isModuleDeclaration(child) && child.body) {
        const id = builder.addEntity({
          id: `${parentId}/${child.name.getText()}`,
          kind: "package",
          name: child.name.getText(),
          parent: parentId,
        });
        collectContainer(child.body, id);
      } else {
        collectContainer(child, parentId);
      }
    });
  }

  function collectClass(node: ts.ClassDeclaration, parentId: string): void {
    const name = node.name?.text ?? "default";
    const joiner = parentId.includes("#") ? "." : "#";
    const classId = builder.addEntity({
      id: `${parentId}${joiner}${name}`,
      kind: "class",
      name,
      parent: parentId,
    });
    classIds.set(node, classId);
    for (const member of node.members) {
      collectMember(member, classId);
    }
  }

  function collectMember(member: ts.ClassElement, classId: string): void {
    let name: string | undefined;
    let registrable: ts.Node | undefined;
    if (ts.isMethodDeclaration(member) && member.body) {
      name = memberName(member.name);
      if (skipAccessors && isTrivialAccessorBody(member.body)) return;
      registrable = member;
    } else if (ts.isConstructorDeclaration(member) && member.body) {
      if (skipConstructors) return;
      name = "constructor";
      registrable = member;
    } else if (ts.isGetAccessor(member) || ts.isSetAccessor(member)) {
      if (skipAccessors || !member.body) return;
      name = `${memberName(member.name)}:${ts.isGetAccessor(member) ? "get" : "set"}`;
      registrable = member;
    } else if (
      ts.isPropertyDeclaration(member) &&
      member.initializer &&
      (ts.isArrowFunction(member.initializer) || ts.isFunctionExpression(member.initializer))
    ) {
      name = memberName(member.name);
      registrable = member;
    }
    if (name === undefined || registrable === undefined) return;
    const id = builder.addEntity({ id: `${classId}.${name}`, kind: "method", name, parent: classId });
    methodIds.set(registrable, id);
    // calls through overload signatures resolve to sibling declarations
    const symbol = checker.getSymbolAtLocation((registrable as ts.NamedDeclaration).name ?? registrable);
    for (const decl of symbol?.declarations ?? []) {
      if (!methodIds.has(decl)) methodIds.set(decl, id);
    }
  }

  // pass 2: relationships and calls
  for (const sf of parsable) {
    sf.forEachChild(function walk(node): void {
      if (ts.isClassDeclaration(node) && classIds.has(node)) {
        extractHeritage(node);
        extractAssociations(node);
      }
      if (ts.isCallExpression(node) || ts.isNewExpression(node)) {
        extractCall(node);
      }
      node.forEachChild(walk);
    });
  }

  function extractHeritage(node: ts.ClassDeclaration): void {
    const sourceId = classIds.get(node)!;
    for (const clause of node.heritageClauses ?? []) {
      if (clause.token !== ts.SyntaxKind.ExtendsKeyword) continue;
      for (const typeNode of clause.types) {
        const target = resolveClassTarget(typeNode.expression);
        if (target) builder.addRelationship({ source: sourceId, target, kind: "generalization" });
      }
    }
  }

  function extractAssociations(node: ts.ClassDeclaration): void {
    const sourceId = classIds.get(node)!;
    const typedMembers: (ts.PropertyDeclaration | ts.ParameterDeclaration)[] = [];
    for (const member of node.members) {
      if (ts.isPropertyDeclaration(member) && !methodIds.has(member)) typedMembers.push(member);
      if (ts.isConstructorDeclaration(member)) {
        for (const param of member.parameters) {
          if (ts.getCombinedModifierFlags(param) !== ts.ModifierFlags.None) typedMembers.push(param);
        }
      }
    }
    for (const member of typedMembers) {
      const type = checker.getTypeAtLocation(member);
      const decl = type.getSymbol()?.declarations?.find(ts.isClassDeclaration);
      if (!decl) continue;
      const target = classIds.get(decl) ?? (emitLibraries ? libraryClass(decl) : undefined);
      if (target) builder.addRelationship({ source: sourceId, target, kind: "association" });
    }
  }

  function extractCall(node: ts.CallExpression | ts.NewExpression): void {
    const caller = enclosingMethod(node);
    const callee = resolveCallee(node);
    if (caller === undefined || callee === undefined) {
      droppedCalls++;
      return;
    }
    builder.addCall({ caller, callee });
  }

  function enclosingMethod(node: ts.Node): string | undefined {
    for (let cur: ts.Node | undefined = node.parent; cur; cur = cur.parent) {
      const id = methodIds.get(cur);
      if (id !== undefined) return id;
    }
    return undefined;
  }

  function resolveCallee(node: ts.CallExpression | ts.NewExpression): string | undefined {
    const signature = checker.getResolvedSignature(node);
    const decl = signature?.declaration;
    if (decl) {
      const known = methodIds.get(decl);
      if (known) return known;
      if (emitLibraries && decl.getSourceFile().isDeclarationFile && !ts.isJSDocSignature(decl)) {
        return libraryMethod(decl);
      }
    }
    // duck-typed or overloaded callees: try the callee expression's symbol
    const expr = node.expression;
    let symbol = expr === undefined ? undefined : checker.getSymbolAtLocation(expr);
    if (symbol && symbol.flags & ts.SymbolFlags.Alias) symbol = checker.getAliasedSymbol(symbol);
    for (const d of symbol?.declarations ?? []) {
      const known = methodIds.get(d);
      if (known) return known;
    }
    return undefined;
  }

  function resolveClassTarget(expr: ts.Expression): string | undefined {
    let symbol = checker.getSymbolAtLocation(expr);
    if (symbol && symbol.flags & ts.SymbolFlags.Alias) symbol = checker.getAliasedSymbol(symbol);
    for (const decl of symbol?.declarations ?? []) {
      const known = classIds.get(decl);
      if (known) return known;
      if (emitLibraries && ts.isClassDeclaration(decl) && decl.getSourceFile().isDeclarationFile) {
        return libraryClass(decl);
      }
    }
    return undefined;
  }

  function ensureLibPackage(): string {
    if (!builder.has(LIB_ID)) {
      builder.addEntity({ id: LIB_ID, kind: "package", name: LIB_ID, parent: ROOT_ID, library: true });
    }
    return LIB_ID;
  }

  function libraryClass(decl: ts.Node): string | undefined {
    const known = libraryIds.get(decl);
    if (known) return known;
    const name = (decl as ts.NamedDeclaration).name?.getText() ?? "<anonymous>";
    const id = builder.addEntity({
      id: `${LIB_ID}#${name}`,
      kind: "class",
      name,
      parent: ensureLibPackage(),
      library: true,
    });
    libraryIds.set(decl, id);
    return id;
  }

  function libraryMethod(decl: ts.SignatureDeclaration): string | undefined {
    const known = libraryIds.get(decl);
    if (known) return known;
    const owner = decl.parent;
    if (!ts.isClassDeclaration(owner) && !ts.isInterfaceDeclaration(owner)) return undefined;
    const ownerId = libraryClass(owner) ?? undefined;
    if (ownerId === undefined) return undefined;
    const name = ts.isConstructorDeclaration(decl) ? "constructor" : memberName(decl.name as ts.PropertyName);
    const id = builder.addEntity({
      id: `${ownerId}.${name}`,
      kind: "method",
      name,
      parent: ownerId,
      library: true,
    });
    libraryIds.set(decl, id);
    return id;
  }

  // libraryClass also serves interface declarations hosting library methods
  function memberName(name: ts.PropertyName): string {
    return ts.isIdentifier(name) || ts.isStringLiteral(name) || ts.isNumericLiteral(name)
      ? name.text
      : name.getText();
  }

  return {
    model: {
      entities: builder.entities,
      relationships: builder.relationships,
      calls: builder.calls,
    },
    summary: {
      files: parsable.length,
      skippedFiles,
      entities: builder.entities.length,
      relationships: builder.relationships.length,
      calls: builder.calls.length,
      droppedCalls,
    },
  };
}

/** True for bodies that only return a member or only assign one: `return this.x` / `this.x = v`. */
export function isTrivialAccessorBody(body: ts.Block): boolean {
  if (body.statements.length !== 1) return false;
  const statement = body.statements[0];
  if (ts.isReturnStatement(statement)) {
    return statement.expression !== undefined && isThisMember(statement.expression);
  }
  if (ts.isExpressionStatement(statement) && ts.isBinaryExpression(statement.expression)) {
    const { operatorToken, left, right } = statement.expression;
    return (
      operatorToken.kind === ts.SyntaxKind.EqualsToken &&
      isThisMember(left) &&
      (ts.isIdentifier(right) || isThisMember(right))
    );
  }
  return false;
}

function isThisMember(expr: ts.Expression): boolean {
  return ts.isPropertyAccessExpression(expr) && expr.expression.kind === ts.SyntaxKind.ThisKeyword;
}

export function renderModel(model: CodeModelJson): string {
  return JSON.stringify(model, null, 2) + "\n";
}
