export class Store {
  protected items: string[] = [];

  add(item: string): void {
    this.items.push(item);
    this.log(item);
  }

  log(item: string): void {
    console.log(`stored ${item}`);
  }

  size(): number {
    return this.items.length;
  }
}

export class MemoryStore extends Store {
  clear(): void {
    this.items = [];
  }

  reload(): void {
    this.clear();
    this.log("reload");
  }
}
