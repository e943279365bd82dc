import { MemoryStore, Store } from "./store";
import { Screen } from "./ui/screen";

export class App {
  private store: Store = new MemoryStore();
  private screen: Screen = new Screen("main");

  run(): void {
    this.store.add("boot");
    this.screen.refresh();
  }

  shutdown(): void {
    this.screen.render();
    this.store.size();
  }
}
